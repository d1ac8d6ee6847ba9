//! Seeded generators for the three simulation scenarios.
//!
//! Every series owns a ChaCha stream keyed by `(seed, group, index)`, so a
//! series is reproduced bit-for-bit regardless of generation order, thread
//! count, or the sizes of the other groups.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::series::TimeSeries;

/// ARMA(2,2) written as
/// `X_t = φ1 X_{t-1} + φ2 X_{t-2} + W_t - θ1 W_{t-1} - θ2 W_{t-2}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArmaSpec {
    pub ar: [f64; 2],
    pub ma: [f64; 2],
    pub noise_sd: f64,
    pub burn_in: usize,
}

impl Default for ArmaSpec {
    fn default() -> Self {
        Self {
            ar: [0.1, 0.5],
            ma: [0.2, 0.8],
            noise_sd: 1.0,
            burn_in: 200,
        }
    }
}

impl ArmaSpec {
    /// AR(2) stationarity triangle, equivalent to both roots of
    /// `1 - φ1 z - φ2 z²` lying outside the unit circle.
    pub fn validate(&self) -> Result<()> {
        let [p1, p2] = self.ar;
        if p1 + p2 < 1.0 && p2 - p1 < 1.0 && p2.abs() < 1.0 {
            Ok(())
        } else {
            Err(Error::UnstableModel(format!(
                "AR coefficients {:?} are not stationary",
                self.ar
            )))
        }
    }
}

/// How the GARCH scale recursion is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GarchForm {
    /// `σ_t = ω + α X²_{t-1} + β σ_{t-1}`, `X_t = σ_t W_t`.
    Literal,
    /// `σ²_t = ω + α X²_{t-1} + β σ²_{t-1}`, `X_t = σ_t W_t`.
    Standard,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GarchSpec {
    pub alpha: f64,
    pub beta: f64,
    pub omega: f64,
    /// Scale at the first generated step.
    pub sigma0: f64,
    pub noise_sd: f64,
    pub burn_in: usize,
    pub form: GarchForm,
}

impl Default for GarchSpec {
    fn default() -> Self {
        Self {
            alpha: 0.2,
            beta: 0.3,
            omega: 0.0,
            sigma0: 1.0,
            noise_sd: 1.0,
            burn_in: 200,
            form: GarchForm::Literal,
        }
    }
}

impl GarchSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha >= 0.0 && self.beta >= 0.0 && self.alpha + self.beta < 1.0) {
            return Err(Error::UnstableModel(format!(
                "GARCH needs alpha, beta >= 0 and alpha + beta < 1 (got {}, {})",
                self.alpha, self.beta
            )));
        }
        if self.omega < 0.0 || self.sigma0 < 0.0 {
            return Err(Error::UnstableModel(
                "GARCH omega and sigma0 must be non-negative".into(),
            ));
        }
        Ok(())
    }
}

fn normal<R: Rng + ?Sized>(rng: &mut R, sd: f64) -> f64 {
    let z: f64 = StandardNormal.sample(rng);
    sd * z
}

/// ARMA(2,2) path of length `len` after discarding `burn_in` steps.
pub fn gen_arma<R: Rng + ?Sized>(spec: &ArmaSpec, len: usize, rng: &mut R) -> Result<TimeSeries> {
    spec.validate()?;
    if len == 0 {
        return Err(Error::InvalidLength {
            label: "arma".into(),
            need: 1,
            got: 0,
        });
    }
    let total = spec.burn_in + len;
    let (mut x1, mut x2) = (0.0, 0.0);
    let (mut w1, mut w2) = (0.0, 0.0);
    let mut out = Vec::with_capacity(len);
    for t in 0..total {
        let w = normal(rng, spec.noise_sd);
        let x = spec.ar[0] * x1 + spec.ar[1] * x2 + w - spec.ma[0] * w1 - spec.ma[1] * w2;
        x2 = x1;
        x1 = x;
        w2 = w1;
        w1 = w;
        if t >= spec.burn_in {
            out.push(x);
        }
    }
    TimeSeries::new("arma", out)
}

/// GARCH(1,1)-type path; fails if the recursion overflows.
pub fn gen_garch<R: Rng + ?Sized>(spec: &GarchSpec, len: usize, rng: &mut R) -> Result<TimeSeries> {
    gen_garch_with_scale(spec, len, rng).map(|(s, _)| s)
}

/// Like [`gen_garch`] but also returns the scale path `σ_t`.
pub fn gen_garch_with_scale<R: Rng + ?Sized>(
    spec: &GarchSpec,
    len: usize,
    rng: &mut R,
) -> Result<(TimeSeries, Vec<f64>)> {
    spec.validate()?;
    if len == 0 {
        return Err(Error::InvalidLength {
            label: "garch".into(),
            need: 1,
            got: 0,
        });
    }
    let total = spec.burn_in + len;
    let mut sigma = spec.sigma0;
    let mut prev = 0.0;
    let mut out = Vec::with_capacity(len);
    let mut scales = Vec::with_capacity(len);
    for t in 0..total {
        if t > 0 {
            sigma = match spec.form {
                GarchForm::Literal => spec.omega + spec.alpha * prev * prev + spec.beta * sigma,
                GarchForm::Standard => {
                    (spec.omega + spec.alpha * prev * prev + spec.beta * sigma * sigma).sqrt()
                }
            };
        }
        let x = sigma * normal(rng, spec.noise_sd);
        if !x.is_finite() || !sigma.is_finite() {
            return Err(Error::UnstableModel(format!(
                "GARCH recursion diverged at step {t}"
            )));
        }
        prev = x;
        if t >= spec.burn_in {
            out.push(x);
            scales.push(sigma);
        }
    }
    Ok((TimeSeries::new("garch", out)?, scales))
}

/// One of the three simulation designs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSpec {
    pub scenario: u8,
    pub group_sizes: Vec<usize>,
    /// Series length `T`.
    pub len: usize,
    pub seed: u64,
    pub arma: ArmaSpec,
    pub garch: GarchSpec,
    /// Standard deviation of the additive observation noise `ε_t`.
    pub obs_noise_sd: f64,
}

impl ScenarioSpec {
    /// Paper-default design for `scenario` with sizes (25, 25) or (20, 15, 15).
    pub fn new(scenario: u8, seed: u64) -> Self {
        let group_sizes = if scenario == 3 {
            vec![20, 15, 15]
        } else {
            vec![25, 25]
        };
        Self {
            scenario,
            group_sizes,
            len: 100,
            seed,
            arma: ArmaSpec::default(),
            garch: GarchSpec::default(),
            obs_noise_sd: 1.0,
        }
    }

    pub fn with_sizes(mut self, sizes: &[usize]) -> Self {
        self.group_sizes = sizes.to_vec();
        self
    }

    pub fn validate(&self) -> Result<()> {
        let groups = match self.scenario {
            1 | 2 => 2,
            3 => 3,
            s => return Err(Error::Scenario(format!("unknown scenario {s}"))),
        };
        if self.group_sizes.len() != groups {
            return Err(Error::Scenario(format!(
                "scenario {} needs {groups} group sizes, got {}",
                self.scenario,
                self.group_sizes.len()
            )));
        }
        if self.group_sizes.contains(&0) {
            return Err(Error::Scenario("group sizes must be positive".into()));
        }
        if self.len < 4 {
            return Err(Error::Scenario(format!(
                "series length {} is too short",
                self.len
            )));
        }
        self.arma.validate()?;
        self.garch.validate()
    }
}

/// A simulated series with its true group index.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledSeries {
    pub series: TimeSeries,
    pub group: usize,
}

/// Output of [`gen_scenario`], ordered by group then index.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulatedCollection {
    pub scenario: u8,
    pub group_names: Vec<String>,
    pub members: Vec<LabeledSeries>,
}

impl SimulatedCollection {
    pub fn labels(&self) -> Vec<usize> {
        self.members.iter().map(|m| m.group).collect()
    }

    pub fn series(&self) -> Vec<TimeSeries> {
        self.members.iter().map(|m| m.series.clone()).collect()
    }
}

pub fn group_name(group: usize) -> String {
    char::from(b'A' + group as u8).to_string()
}

/// RNG for the `index`-th series of `group` under `seed`.
pub fn series_rng(seed: u64, group: usize, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((group as u64) << 32) | index as u64);
    rng
}

/// Generates every series of the scenario with its group label.
pub fn gen_scenario(spec: &ScenarioSpec) -> Result<SimulatedCollection> {
    spec.validate()?;
    let mut members = Vec::with_capacity(spec.group_sizes.iter().sum());
    for (group, &size) in spec.group_sizes.iter().enumerate() {
        for index in 0..size {
            let mut rng = series_rng(spec.seed, group, index);
            let values = gen_member(spec, group, &mut rng)?;
            let label = format!("{}{:03}", group_name(group), index + 1);
            members.push(LabeledSeries {
                series: TimeSeries::new(label, values)?,
                group,
            });
        }
    }
    Ok(SimulatedCollection {
        scenario: spec.scenario,
        group_names: (0..spec.group_sizes.len()).map(group_name).collect(),
        members,
    })
}

fn gen_member(spec: &ScenarioSpec, group: usize, rng: &mut ChaCha8Rng) -> Result<Vec<f64>> {
    let n = spec.len;
    let tf = |t: usize| t as f64 / n as f64;
    let quad = |t: usize| 10.0 * tf(t).powi(2);
    let wave = |t: usize| quad(t) * (0.9 * PI * tf(t)).sin();

    let use_garch = matches!((spec.scenario, group), (1 | 2, 1) | (3, 2));
    let process = if use_garch {
        gen_garch(&spec.garch, n, rng)?
    } else {
        gen_arma(&spec.arma, n, rng)?
    };
    let x = process.values();
    let eps: Vec<f64> = (0..n).map(|_| normal(rng, spec.obs_noise_sd)).collect();

    // t runs 1..=T
    Ok((1..=n)
        .map(|t| {
            let (xt, et) = (x[t - 1], eps[t - 1]);
            match (spec.scenario, group) {
                (1, _) => xt + et,
                (2, 0) => quad(t) + xt + et,
                (2, _) => wave(t) + xt + et,
                (3, 0) => 5.0 + xt + et,
                (3, 1) => quad(t) * xt + et,
                _ => wave(t) * xt + et,
            }
        })
        .collect())
}
