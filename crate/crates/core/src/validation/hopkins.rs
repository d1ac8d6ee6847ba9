use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{Beta, ContinuousCDF};

use crate::clustering::{euclidean, FeatureMatrix};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HopkinsResult {
    /// Mean statistic over repetitions; near 1 means clusterable, near 0.5 uniform.
    pub statistic: f64,
    /// Two-sided tail probability under `Beta(m, m)`.
    pub p_value: f64,
    pub m_samples: usize,
    pub reps: usize,
    pub seed: u64,
}

/// `max(ceil(n / 10), 5)`.
pub fn default_hopkins_samples(n: usize) -> usize {
    n.div_ceil(10).max(5)
}

/// Hopkins clustering-tendency statistic with distances raised to the data
/// dimension.
pub fn hopkins(
    m: &FeatureMatrix,
    m_samples: Option<usize>,
    reps: usize,
    seed: u64,
) -> Result<HopkinsResult> {
    let rows = m.rows();
    let n = rows.len();
    let m_samples = m_samples.unwrap_or_else(|| default_hopkins_samples(n));
    if m_samples == 0 || m_samples >= n {
        return Err(Error::InvalidSampleSize { m: m_samples, n });
    }
    let dim = m.n_cols();
    let lo: Vec<f64> = (0..dim)
        .map(|j| rows.iter().map(|r| r[j]).fold(f64::INFINITY, f64::min))
        .collect();
    let hi: Vec<f64> = (0..dim)
        .map(|j| rows.iter().map(|r| r[j]).fold(f64::NEG_INFINITY, f64::max))
        .collect();
    let power = dim as i32;

    let reps = reps.max(1);
    let stats: Vec<f64> = (0..reps)
        .into_par_iter()
        .map(|rep| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(rep as u64);
            let mut u_sum = 0.0;
            for _ in 0..m_samples {
                let probe: Vec<f64> = (0..dim)
                    .map(|j| {
                        if hi[j] > lo[j] {
                            rng.random_range(lo[j]..hi[j])
                        } else {
                            lo[j]
                        }
                    })
                    .collect();
                let u = rows
                    .iter()
                    .map(|r| euclidean(&probe, r))
                    .fold(f64::INFINITY, f64::min);
                u_sum += u.powi(power);
            }
            let mut w_sum = 0.0;
            for i in rand::seq::index::sample(&mut rng, n, m_samples) {
                let w = rows
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, r)| euclidean(&rows[i], r))
                    .fold(f64::INFINITY, f64::min);
                w_sum += w.powi(power);
            }
            if u_sum + w_sum == 0.0 {
                0.5
            } else {
                u_sum / (u_sum + w_sum)
            }
        })
        .collect();
    let statistic = stats.iter().sum::<f64>() / reps as f64;
    let beta = Beta::new(m_samples as f64, m_samples as f64).expect("positive shape parameters");
    let cdf = beta.cdf(statistic);
    let p_value = (2.0 * cdf.min(1.0 - cdf)).min(1.0);
    Ok(HopkinsResult {
        statistic,
        p_value,
        m_samples,
        reps,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{blobs, uniform_points};

    #[test]
    fn uniform_data_is_near_half() {
        let mut total = 0.0;
        for seed in 0..10 {
            let m = FeatureMatrix::from_points(uniform_points(200, 2, seed)).unwrap();
            let h = hopkins(&m, None, 20, seed).unwrap();
            assert!((0.0..1.0).contains(&h.statistic));
            total += h.statistic;
        }
        let mean = total / 10.0;
        assert!((0.45..=0.58).contains(&mean), "mean {mean}");
    }

    #[test]
    fn separated_blobs_score_high() {
        let (pts, _) = blobs(&[[0.0, 0.0], [20.0, 20.0]], 50, 0.5, 1);
        let h = hopkins(&FeatureMatrix::from_points(pts).unwrap(), None, 50, 3).unwrap();
        assert!(h.statistic > 0.8, "{}", h.statistic);
        assert!(h.p_value < 0.01);
    }

    #[test]
    fn sample_size_checks() {
        let m = FeatureMatrix::from_points(uniform_points(10, 2, 0)).unwrap();
        assert!(matches!(
            hopkins(&m, Some(10), 1, 0),
            Err(Error::InvalidSampleSize { .. })
        ));
        assert_eq!(default_hopkins_samples(49), 5);
        assert_eq!(default_hopkins_samples(200), 20);
    }

    #[test]
    fn deterministic_given_seed() {
        let m = FeatureMatrix::from_points(uniform_points(60, 3, 2)).unwrap();
        assert_eq!(
            hopkins(&m, None, 30, 9).unwrap(),
            hopkins(&m, None, 30, 9).unwrap()
        );
    }
}
