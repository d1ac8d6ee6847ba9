//! Time-series container, preprocessing and elementary spectral quantities.
//!
//! The discrete Fourier transform follows the 1-based convention
//! `d(λ_j) = Σ_{t=1}^{T} X_t exp(-i λ_j t)` with `λ_j = 2πj/T`. Relative to
//! the usual 0-based FFT this carries an extra phase `exp(-i λ_j)` per bin,
//! which matters for bispectral products.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A uniformly sampled, finite, real-valued series with a provenance label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    values: Vec<f64>,
    label: String,
    /// Time index of the first value (1 for freshly loaded data).
    t0_index: i64,
}

impl TimeSeries {
    pub fn new(label: impl Into<String>, values: Vec<f64>) -> Result<Self> {
        Self::with_origin(label, values, 1)
    }

    pub fn with_origin(label: impl Into<String>, values: Vec<f64>, t0_index: i64) -> Result<Self> {
        let label = label.into();
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite(label));
        }
        Ok(Self {
            values,
            label,
            t0_index,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn t0_index(&self) -> i64 {
        self.t0_index
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mean(&self) -> f64 {
        mean(&self.values)
    }

    pub(crate) fn require_len(&self, need: usize) -> Result<()> {
        if self.values.len() < need {
            return Err(Error::InvalidLength {
                label: self.label.clone(),
                need,
                got: self.values.len(),
            });
        }
        Ok(())
    }

    fn derived(&self, values: Vec<f64>, t0_index: i64) -> Self {
        Self {
            values,
            label: self.label.clone(),
            t0_index,
        }
    }
}

/// DFT coefficients `d(λ_j)` for `j = 0..T`.
#[derive(Debug, Clone, PartialEq)]
pub struct DftTable {
    coefficients: Vec<Complex64>,
}

impl DftTable {
    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// `d(λ_j)` with the index reduced mod T.
    #[inline]
    pub fn at(&self, j: usize) -> Complex64 {
        self.coefficients[j % self.coefficients.len()]
    }

    /// `|d(λ_j)|²`, the unnormalized periodogram ordinate.
    pub fn power(&self, j: usize) -> f64 {
        self.at(j).norm_sqr()
    }
}

/// Fourier frequency `2πj/T`.
#[inline]
pub fn fourier_frequency(j: usize, len: usize) -> f64 {
    2.0 * PI * j as f64 / len as f64
}

/// Fourier frequency folded onto `(-π, π]`: indices above `T/2` map to `λ_j - 2π`.
#[inline]
pub fn folded_frequency(j: usize, len: usize) -> f64 {
    let j = j % len;
    if 2 * j > len {
        fourier_frequency(j, len) - 2.0 * PI
    } else {
        fourier_frequency(j, len)
    }
}

/// First differences `X_{t+1} - X_t`; the result is one shorter.
pub fn difference(series: &TimeSeries) -> Result<TimeSeries> {
    series.require_len(2)?;
    let v = series.values();
    let out = v.windows(2).map(|w| w[1] - w[0]).collect();
    Ok(series.derived(out, series.t0_index + 1))
}

/// Divides every value by the first one, so the output starts at exactly 1.
pub fn scale_to_initial(series: &TimeSeries) -> Result<TimeSeries> {
    series.require_len(1)?;
    let first = series.values()[0];
    if first == 0.0 {
        return Err(Error::DegenerateScale(series.label.clone()));
    }
    let mut out: Vec<f64> = series.values().iter().map(|v| v / first).collect();
    out[0] = 1.0;
    Ok(series.derived(out, series.t0_index))
}

/// DFT with the 1-based time index.
pub fn dft(series: &TimeSeries) -> Result<DftTable> {
    series.require_len(1)?;
    let n = series.len();
    let mut buf: Vec<Complex64> = series
        .values()
        .iter()
        .map(|&x| Complex64::new(x, 0.0))
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    // shift the 0-based transform to t = 1..T
    for (j, c) in buf.iter_mut().enumerate() {
        *c *= Complex64::from_polar(1.0, -fourier_frequency(j, n));
    }
    Ok(DftTable { coefficients: buf })
}

/// Biased autocovariance `γ̂(h) = (1/T) Σ (X_t - X̄)(X_{t+h} - X̄)`.
pub fn autocovariance(values: &[f64], lag: usize) -> f64 {
    let n = values.len();
    if lag >= n {
        return 0.0;
    }
    let m = mean(values);
    let s: f64 = (0..n - lag)
        .map(|t| (values[t] - m) * (values[t + lag] - m))
        .sum();
    s / n as f64
}

/// Sample autocorrelations for lags `0..=max_lag`.
pub fn acf(series: &TimeSeries, max_lag: usize) -> Result<Vec<f64>> {
    if max_lag >= series.len() {
        return Err(Error::InvalidLag {
            lag: max_lag,
            len: series.len(),
        });
    }
    let g0 = autocovariance(series.values(), 0);
    if g0 <= 0.0 {
        return Err(Error::DegenerateVariance(series.label.clone()));
    }
    let mut out = Vec::with_capacity(max_lag + 1);
    out.push(1.0);
    for h in 1..=max_lag {
        out.push(autocovariance(series.values(), h) / g0);
    }
    Ok(out)
}

/// Return statistics of an initial-value-scaled price series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DescriptiveStats {
    pub mean_return: f64,
    /// Population standard deviation of simple returns.
    pub volatility: f64,
    /// Lag-1 autocorrelation of returns; `None` when returns are constant.
    pub acf1: Option<f64>,
}

/// Mean, volatility and lag-1 autocorrelation of the first differences.
pub fn descriptive_stats(series: &TimeSeries) -> Result<DescriptiveStats> {
    series.require_len(3)?;
    let returns = difference(series)?;
    let r = returns.values();
    let mean_return = mean(r);
    let volatility =
        (r.iter().map(|x| (x - mean_return).powi(2)).sum::<f64>() / r.len() as f64).sqrt();
    let acf1 = match acf(&returns, 1) {
        Ok(a) => Some(a[1]),
        Err(Error::DegenerateVariance(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(DescriptiveStats {
        mean_return,
        volatility,
        acf1,
    })
}

/// `T / j*` where `j*` maximizes the periodogram over `1..=T/2`.
///
/// Ties resolve to the smallest index.
pub fn dominant_period(series: &TimeSeries) -> Result<f64> {
    series.require_len(4)?;
    let table = dft(series)?;
    let n = series.len();
    let mut best = (0usize, 0.0f64);
    for j in 1..=n / 2 {
        let p = table.power(j);
        if p > best.1 {
            best = (j, p);
        }
    }
    // relative floor: powers that are pure rounding noise count as zero
    let scale: f64 = series.values().iter().map(|x| x * x).sum::<f64>() * n as f64;
    if best.0 == 0 || best.1 <= 1e-24 * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::DegenerateSpectrum(series.label.clone()));
    }
    Ok(n as f64 / best.0 as f64)
}

pub(crate) fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    values.iter().sum::<f64>() / values.len() as f64
}
