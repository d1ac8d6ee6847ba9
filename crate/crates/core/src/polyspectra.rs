//! Spectral (k = 1) and bispectral (k = 2) means.
//!
//! For a weight function `g` the estimator is
//!
//! ```text
//! M̂_g(f_k) = (2π)^k T^{-k-1} Σ d(λ_1)···d(λ_k) d(-[λ_1+…+λ_k]) g(λ) Φ(λ)
//! ```
//!
//! summed over all k-tuples of Fourier frequencies. `Φ` removes every tuple
//! with a sub-sum congruent to zero, which makes the estimate blind to the
//! series mean and to lower-order cumulants. Weights are evaluated on
//! frequencies folded onto `(-π, π]`.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{dft, folded_frequency, TimeSeries};

/// Anything that can weight a polyspectrum.
pub trait Weight: Sync {
    /// Number of frequency arguments (1 for spectra, 2 for bispectra).
    fn order(&self) -> usize;

    /// Value at a frequency tuple of length `order()`, each entry in `[-π, π]`.
    fn eval(&self, lambda: &[f64]) -> f64;

    fn describe(&self) -> String;
}

/// The shipped weight families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightFunction {
    /// Constant 1 of the given order.
    Unit { order: usize },
    /// `1` on `lo <= |λ| < hi`.
    BandIndicator { lo: f64, hi: f64 },
    /// `1 - |λ|/π`.
    Triangular,
    /// `cos(λ)`.
    Cosine1d,
    /// `1` inside the open disc of radius `r`.
    DiscIndicator { r: f64 },
    /// `sqrt(λ1² + λ2²)`.
    Radial,
    /// `cos(λ1 + λ2)`.
    CosineSum,
    /// `cos(λ1)·cos(λ2)`.
    CosineProduct,
}

impl WeightFunction {
    pub fn kind_name(&self) -> &'static str {
        match self {
            WeightFunction::Unit { .. } => "unit",
            WeightFunction::BandIndicator { .. } => "band_indicator",
            WeightFunction::Triangular => "triangular",
            WeightFunction::Cosine1d => "cosine_1d",
            WeightFunction::DiscIndicator { .. } => "disc_indicator",
            WeightFunction::Radial => "radial",
            WeightFunction::CosineSum => "cosine_sum",
            WeightFunction::CosineProduct => "cosine_product",
        }
    }

    #[inline]
    fn eval_unchecked(&self, lambda: &[f64]) -> f64 {
        match *self {
            WeightFunction::Unit { .. } => 1.0,
            WeightFunction::BandIndicator { lo, hi } => {
                let a = lambda[0].abs();
                if lo <= a && a < hi {
                    1.0
                } else {
                    0.0
                }
            }
            WeightFunction::Triangular => 1.0 - lambda[0].abs() / PI,
            WeightFunction::Cosine1d => lambda[0].cos(),
            WeightFunction::DiscIndicator { r } => {
                if lambda[0] * lambda[0] + lambda[1] * lambda[1] < r * r {
                    1.0
                } else {
                    0.0
                }
            }
            WeightFunction::Radial => lambda[0].hypot(lambda[1]),
            WeightFunction::CosineSum => (lambda[0] + lambda[1]).cos(),
            WeightFunction::CosineProduct => lambda[0].cos() * lambda[1].cos(),
        }
    }
}

impl Weight for WeightFunction {
    fn order(&self) -> usize {
        match self {
            WeightFunction::Unit { order } => *order,
            WeightFunction::BandIndicator { .. }
            | WeightFunction::Triangular
            | WeightFunction::Cosine1d => 1,
            WeightFunction::DiscIndicator { .. }
            | WeightFunction::Radial
            | WeightFunction::CosineSum
            | WeightFunction::CosineProduct => 2,
        }
    }

    fn eval(&self, lambda: &[f64]) -> f64 {
        self.eval_unchecked(lambda)
    }

    fn describe(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for WeightFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightFunction::Unit { order } => write!(f, "unit{{order: {order}}}"),
            WeightFunction::BandIndicator { lo, hi } => {
                write!(f, "band_indicator{{lo: {lo}, hi: {hi}}}")
            }
            WeightFunction::DiscIndicator { r } => write!(f, "disc_indicator{{r: {r}}}"),
            other => f.write_str(other.kind_name()),
        }
    }
}

/// Evaluates `g` at `lambda`, checking that the tuple length matches the order.
pub fn eval_weight<W: Weight + ?Sized>(g: &W, lambda: &[f64]) -> Result<f64> {
    if lambda.len() != g.order() {
        return Err(Error::WeightArity {
            kind: g.describe(),
            kind_order: g.order(),
            got: lambda.len(),
        });
    }
    Ok(g.eval(lambda))
}

/// A weight together with the feature name it produces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedWeight {
    pub name: String,
    pub weight: WeightFunction,
}

impl NamedWeight {
    pub fn new(name: impl Into<String>, weight: WeightFunction) -> Self {
        Self {
            name: name.into(),
            weight,
        }
    }
}

/// Four spectral and four bispectral weights used for feature extraction.
pub fn default_weights() -> Vec<NamedWeight> {
    use WeightFunction::*;
    vec![
        NamedWeight::new(
            "spec_band_lo",
            BandIndicator {
                lo: 0.0,
                hi: PI / 2.0,
            },
        ),
        NamedWeight::new(
            "spec_band_hi",
            BandIndicator {
                lo: PI / 2.0,
                hi: PI,
            },
        ),
        NamedWeight::new("spec_triangular", Triangular),
        NamedWeight::new("spec_cosine", Cosine1d),
        NamedWeight::new("bispec_disc", DiscIndicator { r: PI / 2.0 }),
        NamedWeight::new("bispec_radial", Radial),
        NamedWeight::new("bispec_cosine_sum", CosineSum),
        NamedWeight::new("bispec_cosine_product", CosineProduct),
    ]
}

/// `true` iff no non-empty subset of the Fourier indices sums to 0 mod `len`.
pub fn phi_indicator(freq_indices: &[usize], len: usize) -> bool {
    let k = freq_indices.len();
    (1u32..(1 << k)).all(|mask| {
        let s: usize = (0..k)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| freq_indices[i] % len)
            .sum();
        !s.is_multiple_of(len)
    })
}

/// Output of the estimator for one series and one weight.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyspectralEstimate {
    pub value: f64,
    pub weight: String,
    pub order: usize,
    pub raw_complex: Complex64,
    pub series_label: String,
    /// Set when the imaginary part exceeds rounding level, which only
    /// happens for weights that are not even in `λ`.
    pub asymmetry_warning: bool,
}

fn check_input(series: &TimeSeries, order: usize) -> Result<()> {
    if !(1..=2).contains(&order) {
        return Err(Error::WeightArity {
            kind: format!("order-{order}"),
            kind_order: order,
            got: order,
        });
    }
    series.require_len(order + 2)
}

fn finish(series: &TimeSeries, g: &dyn Weight, sum: Complex64) -> PolyspectralEstimate {
    let order = g.order();
    let n = series.len() as f64;
    let raw = sum * (2.0 * PI).powi(order as i32) / n.powi(order as i32 + 1);
    let asymmetry_warning = raw.im.abs() > 1e-6 * (1.0 + raw.norm());
    if asymmetry_warning {
        log::warn!(
            "series `{}`: weight {} leaves imaginary part {:e}",
            series.label(),
            g.describe(),
            raw.im
        );
    }
    PolyspectralEstimate {
        value: raw.re,
        weight: g.describe(),
        order,
        raw_complex: raw,
        series_label: series.label().to_string(),
        asymmetry_warning,
    }
}

/// Polyspectral mean of `series` under weight `g`.
pub fn polyspectral_mean<W: Weight>(series: &TimeSeries, g: &W) -> Result<PolyspectralEstimate> {
    let mut out = polyspectral_means(series, &[g as &dyn Weight])?;
    Ok(out.remove(0))
}

/// Evaluates several weights against one series, sharing the DFT and the
/// per-tuple products.
pub fn polyspectral_means(
    series: &TimeSeries,
    weights: &[&dyn Weight],
) -> Result<Vec<PolyspectralEstimate>> {
    for g in weights {
        check_input(series, g.order())?;
    }
    let n = series.len();
    let table = dft(series)?;
    let d = table.coefficients();
    let freq: Vec<f64> = (0..n).map(|j| folded_frequency(j, n)).collect();

    let spectral: Vec<usize> = (0..weights.len())
        .filter(|&i| weights[i].order() == 1)
        .collect();
    let bispectral: Vec<usize> = (0..weights.len())
        .filter(|&i| weights[i].order() == 2)
        .collect();
    let mut sums = vec![Complex64::new(0.0, 0.0); weights.len()];

    if !spectral.is_empty() {
        for j in 1..n {
            let p = d[j] * d[(n - j) % n];
            for &w in &spectral {
                sums[w] += p * weights[w].eval(&[freq[j]]);
            }
        }
    }
    if !bispectral.is_empty() {
        for j1 in 1..n {
            for j2 in 1..n {
                let s = (j1 + j2) % n;
                if s == 0 {
                    continue;
                }
                // d(-λ) = conj(d(λ)) for real input
                let p = d[j1] * d[j2] * d[s].conj();
                let lambda = [freq[j1], freq[j2]];
                for &w in &bispectral {
                    sums[w] += p * weights[w].eval(&lambda);
                }
            }
        }
    }
    Ok(weights
        .iter()
        .zip(sums)
        .map(|(g, s)| finish(series, *g, s))
        .collect())
}

/// Direct evaluation of the estimator: every DFT ordinate is recomputed from
/// the raw series for every tuple. Quadratic-to-cubic cost, so it refuses
/// series longer than 256.
pub fn brute_force_polyspectral_mean<W: Weight>(
    series: &TimeSeries,
    g: &W,
) -> Result<PolyspectralEstimate> {
    let order = g.order();
    check_input(series, order)?;
    let n = series.len();
    if n > 256 {
        return Err(Error::OracleSize(n));
    }
    let x = series.values();
    let naive = |lambda: f64| -> Complex64 {
        x.iter()
            .enumerate()
            .map(|(i, &v)| Complex64::from_polar(v, -lambda * (i + 1) as f64))
            .sum()
    };
    let grid = |j: usize| 2.0 * PI * j as f64 / n as f64;
    let fold = |lambda: f64| {
        if lambda > PI {
            lambda - 2.0 * PI
        } else {
            lambda
        }
    };

    let mut sum = Complex64::new(0.0, 0.0);
    let mut idx = vec![0usize; order];
    loop {
        if phi_indicator(&idx, n) {
            let lambdas: Vec<f64> = idx.iter().map(|&j| grid(j)).collect();
            let total: f64 = lambdas.iter().sum();
            let mut term = naive(-total);
            for &l in &lambdas {
                term *= naive(l);
            }
            let folded: Vec<f64> = lambdas.iter().map(|&l| fold(l)).collect();
            sum += term * g.eval(&folded);
        }
        // odometer over {0..n}^order
        let mut pos = 0;
        loop {
            if pos == order {
                return Ok(finish(series, g, sum));
            }
            idx[pos] += 1;
            if idx[pos] < n {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}
