//! Within-cluster dispersion curves: elbow and gap statistic.

use std::ops::RangeInclusive;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::clustering::{kmeans_points, FeatureMatrix, KMeansConfig};
use crate::error::{Error, Result};

/// Offset mixed into the seed of reference-set streams so they never share a
/// stream with the k-means restarts.
const REFERENCE_SALT: u64 = 0x9e37_79b9_7f4a_7c15;

fn check_range(ks: &RangeInclusive<usize>, n: usize) -> Result<()> {
    if ks.is_empty() || *ks.start() == 0 || *ks.end() > n {
        return Err(Error::InvalidK {
            k: if ks.is_empty() { 0 } else { *ks.end() },
            n,
        });
    }
    Ok(())
}

/// Best-of-restarts k-means WSS for every k in the range, in ascending k.
pub fn wss_curve(
    m: &FeatureMatrix,
    ks: RangeInclusive<usize>,
    seed: u64,
    n_init: usize,
) -> Result<Vec<(usize, f64)>> {
    check_range(&ks, m.n_rows())?;
    ks.map(|k| {
        Ok((
            k,
            kmeans_points(m.rows(), k, &KMeansConfig::new(seed, n_init))?.objective,
        ))
    })
    .collect()
}

/// k with the largest second difference of the WSS curve, or `None` when
/// every second difference is below 5% of the first WSS value.
pub fn elbow(curve: &[(usize, f64)]) -> Option<usize> {
    if curve.len() < 3 {
        return None;
    }
    let base = curve[0].1;
    let mut best: Option<(usize, f64)> = None;
    for w in curve.windows(3) {
        let second = w[0].1 - 2.0 * w[1].1 + w[2].1;
        if best.is_none_or(|b| second > b.1) {
            best = Some((w[1].0, second));
        }
    }
    best.filter(|b| b.1 >= 0.05 * base).map(|b| b.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapPoint {
    pub k: usize,
    #[serde(with = "crate::serde_num::float")]
    pub log_w: f64,
    pub expected_log_w: f64,
    #[serde(with = "crate::serde_num::float")]
    pub gap: f64,
    pub se: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapResult {
    pub points: Vec<GapPoint>,
    pub recommended_k: usize,
    pub b: usize,
    pub seed: u64,
}

impl GapResult {
    pub fn at(&self, k: usize) -> Option<&GapPoint> {
        self.points.iter().find(|p| p.k == k)
    }
}

/// Gap statistic with reference sets drawn uniformly over each feature's
/// observed range. The recommended k is the smallest one with
/// `gap(k) >= gap(k+1) - se(k+1)`, or the largest k in range if none is.
pub fn gap_statistic(
    m: &FeatureMatrix,
    ks: RangeInclusive<usize>,
    b: usize,
    seed: u64,
    n_init: usize,
) -> Result<GapResult> {
    if b < 10 {
        return Err(Error::Config(format!(
            "gap statistic needs at least 10 reference sets, got {b}"
        )));
    }
    let rows = m.rows();
    let n = rows.len();
    check_range(&ks, n)?;
    let ks: Vec<usize> = ks.collect();
    let cfg = KMeansConfig::new(seed, n_init);
    let log_w: Vec<f64> = ks
        .iter()
        .map(|&k| Ok(kmeans_points(rows, k, &cfg)?.objective.ln()))
        .collect::<Result<_>>()?;

    let dim = m.n_cols();
    let lo: Vec<f64> = (0..dim)
        .map(|j| rows.iter().map(|r| r[j]).fold(f64::INFINITY, f64::min))
        .collect();
    let hi: Vec<f64> = (0..dim)
        .map(|j| rows.iter().map(|r| r[j]).fold(f64::NEG_INFINITY, f64::max))
        .collect();

    // ref_log_w[b][i] = log W_{ks[i]} on reference set b
    let ref_log_w: Vec<Vec<f64>> = (0..b)
        .into_par_iter()
        .map(|rep| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ REFERENCE_SALT);
            rng.set_stream(rep as u64);
            let reference: Vec<Vec<f64>> = (0..n)
                .map(|_| {
                    (0..dim)
                        .map(|j| {
                            if hi[j] > lo[j] {
                                rng.random_range(lo[j]..hi[j])
                            } else {
                                lo[j]
                            }
                        })
                        .collect()
                })
                .collect();
            let ref_cfg = KMeansConfig::new(seed.wrapping_add(rep as u64 + 1), n_init);
            ks.iter()
                .map(|&k| Ok(kmeans_points(&reference, k, &ref_cfg)?.objective.ln()))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;

    let bf = b as f64;
    let points: Vec<GapPoint> = ks
        .iter()
        .enumerate()
        .map(|(i, &k)| {
            let mean = ref_log_w.iter().map(|r| r[i]).sum::<f64>() / bf;
            let var = ref_log_w.iter().map(|r| (r[i] - mean).powi(2)).sum::<f64>() / bf;
            GapPoint {
                k,
                log_w: log_w[i],
                expected_log_w: mean,
                gap: mean - log_w[i],
                se: var.sqrt() * (1.0 + 1.0 / bf).sqrt(),
            }
        })
        .collect();
    let recommended_k = points
        .windows(2)
        .find(|w| w[0].gap >= w[1].gap - w[1].se)
        .map_or(*ks.last().expect("non-empty range"), |w| w[0].k);
    Ok(GapResult {
        points,
        recommended_k,
        b,
        seed,
    })
}
