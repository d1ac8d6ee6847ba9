//! k-medoids: classical PAM (BUILD + SWAP) and its sampling extension CLARA.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Algorithm, Centers, ClusteringResult, Dissimilarity, FeatureMatrix};
use crate::error::{Error, Result};

/// Nearest medoid for every point; ties go to the earlier medoid.
fn assign(d: &Dissimilarity, medoids: &[usize]) -> (Vec<usize>, f64) {
    let mut total = 0.0;
    let labels = (0..d.len())
        .map(|i| {
            let mut best = (0, f64::INFINITY);
            for (c, &m) in medoids.iter().enumerate() {
                let v = d.get(i, m);
                if v < best.1 {
                    best = (c, v);
                }
            }
            total += best.1;
            best.0
        })
        .collect();
    (labels, total)
}

fn cost(d: &Dissimilarity, medoids: &[usize]) -> f64 {
    (0..d.len())
        .map(|i| {
            medoids
                .iter()
                .map(|&m| d.get(i, m))
                .fold(f64::INFINITY, f64::min)
        })
        .sum()
}

fn build(d: &Dissimilarity, k: usize) -> Vec<usize> {
    let n = d.len();
    let first = (0..n)
        .map(|i| (i, (0..n).map(|j| d.get(i, j)).sum::<f64>()))
        .fold(
            (0, f64::INFINITY),
            |best, (i, s)| if s < best.1 { (i, s) } else { best },
        )
        .0;
    let mut medoids = vec![first];
    let mut nearest: Vec<f64> = (0..n).map(|j| d.get(j, first)).collect();
    while medoids.len() < k {
        let mut best = (usize::MAX, -1.0);
        for i in 0..n {
            if medoids.contains(&i) {
                continue;
            }
            let gain: f64 = (0..n).map(|j| (nearest[j] - d.get(j, i)).max(0.0)).sum();
            if gain > best.1 {
                best = (i, gain);
            }
        }
        let pick = best.0;
        medoids.push(pick);
        for (j, v) in nearest.iter_mut().enumerate() {
            *v = v.min(d.get(j, pick));
        }
    }
    medoids
}

/// Partitioning around medoids on a dissimilarity matrix.
///
/// BUILD picks medoids greedily; SWAP then applies the best medoid/non-medoid
/// exchange for as long as it strictly lowers the total dissimilarity.
/// The algorithm is deterministic; `seed` is only recorded.
pub fn pam(d: &Dissimilarity, k: usize, seed: u64) -> Result<ClusteringResult> {
    let n = d.len();
    if k == 0 || k > n {
        return Err(Error::InvalidK { k, n });
    }
    let mut medoids = build(d, k);
    let mut current = cost(d, &medoids);
    let mut trace = vec![current];
    let mut iterations = 0;
    loop {
        let mut best: Option<(usize, usize, f64)> = None;
        for pos in 0..k {
            for o in 0..n {
                if medoids.contains(&o) {
                    continue;
                }
                let old = medoids[pos];
                medoids[pos] = o;
                let c = cost(d, &medoids);
                medoids[pos] = old;
                if c < best.map_or(current, |b| b.2) {
                    best = Some((pos, o, c));
                }
            }
        }
        match best {
            Some((pos, o, c)) => {
                medoids[pos] = o;
                current = c;
                trace.push(c);
                iterations += 1;
            }
            None => break,
        }
    }
    let (assignments, objective) = assign(d, &medoids);
    Ok(ClusteringResult {
        algorithm: Algorithm::Pam,
        k,
        assignments,
        centers: Centers::Medoids(medoids),
        objective,
        objective_trace: trace,
        iterations,
        seed,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClaraConfig {
    pub n_samples: usize,
    /// `None` means `min(rows, 40 + 2k)`.
    pub sample_size: Option<usize>,
    pub seed: u64,
}

impl Default for ClaraConfig {
    fn default() -> Self {
        Self {
            n_samples: 5,
            sample_size: None,
            seed: 0,
        }
    }
}

/// CLARA with the default number of samples and sample size.
pub fn clara_default(m: &FeatureMatrix, k: usize, seed: u64) -> Result<ClusteringResult> {
    let n = m.n_rows();
    clara(m, k, 5, (40 + 2 * k).min(n), seed)
}

/// Runs PAM on `n_samples` random subsets, extends each medoid set to all
/// rows, and keeps the set with the lowest total dissimilarity.
pub fn clara(
    m: &FeatureMatrix,
    k: usize,
    n_samples: usize,
    sample_size: usize,
    seed: u64,
) -> Result<ClusteringResult> {
    let n = m.n_rows();
    if k == 0 || k > n {
        return Err(Error::InvalidK { k, n });
    }
    if sample_size < k || sample_size > n {
        return Err(Error::InvalidSampleSize { m: sample_size, n });
    }
    let d = Dissimilarity::euclidean(m.rows());
    let runs: Vec<Result<(Vec<usize>, Vec<usize>, f64)>> = (0..n_samples.max(1))
        .into_par_iter()
        .map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(s as u64);
            let mut idx = rand::seq::index::sample(&mut rng, n, sample_size).into_vec();
            idx.sort_unstable();
            let local = pam(&d.subset(&idx), k, seed)?;
            let Centers::Medoids(local_medoids) = local.centers else {
                unreachable!("pam returns medoids")
            };
            let medoids: Vec<usize> = local_medoids.iter().map(|&i| idx[i]).collect();
            let (labels, total) = assign(&d, &medoids);
            Ok((medoids, labels, total))
        })
        .collect();
    let mut trace = Vec::with_capacity(runs.len());
    let mut best: Option<(Vec<usize>, Vec<usize>, f64)> = None;
    for run in runs {
        let run = run?;
        if best.as_ref().is_none_or(|b| run.2 < b.2) {
            best = Some(run);
        }
        trace.push(best.as_ref().map_or(f64::INFINITY, |b| b.2));
    }
    let (medoids, assignments, objective) = best.expect("at least one sample");
    Ok(ClusteringResult {
        algorithm: Algorithm::Clara,
        k,
        assignments,
        centers: Centers::Medoids(medoids),
        objective,
        objective_trace: trace,
        iterations: n_samples.max(1),
        seed,
    })
}
