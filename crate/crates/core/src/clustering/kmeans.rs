//! Lloyd's k-means with k-means++ seeding and best-of-restarts selection.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    cluster_means, sq_euclidean, wss, Algorithm, Centers, ClusteringResult, FeatureMatrix,
};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KMeansConfig {
    pub n_init: usize,
    pub max_iter: usize,
    pub seed: u64,
}

impl Default for KMeansConfig {
    fn default() -> Self {
        Self {
            n_init: 25,
            max_iter: 300,
            seed: 0,
        }
    }
}

impl KMeansConfig {
    pub fn new(seed: u64, n_init: usize) -> Self {
        Self {
            seed,
            n_init,
            ..Self::default()
        }
    }
}

/// k-means on the rows of a feature matrix (expected standardized).
pub fn kmeans(m: &FeatureMatrix, k: usize, seed: u64, n_init: usize) -> Result<ClusteringResult> {
    kmeans_points(m.rows(), k, &KMeansConfig::new(seed, n_init))
}

/// k-means on raw points. Restarts run in parallel; the lowest WSS wins and
/// ties go to the lowest restart index.
pub fn kmeans_points(rows: &[Vec<f64>], k: usize, cfg: &KMeansConfig) -> Result<ClusteringResult> {
    let n = rows.len();
    if k == 0 || k > n {
        return Err(Error::InvalidK { k, n });
    }
    let restarts = cfg.n_init.max(1);
    let runs: Vec<ClusteringResult> = (0..restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(r as u64);
            lloyd(rows, k, cfg.max_iter, &mut rng, cfg.seed)
        })
        .collect();
    let best = runs
        .into_iter()
        .reduce(|best, r| {
            if r.objective < best.objective {
                r
            } else {
                best
            }
        })
        .expect("at least one restart");
    Ok(best)
}

fn nearest(point: &[f64], centers: &[Vec<f64>]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (c, center) in centers.iter().enumerate() {
        let d = sq_euclidean(point, center);
        if d < best.1 {
            best = (c, d);
        }
    }
    best
}

fn plus_plus_init(rows: &[Vec<f64>], k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let n = rows.len();
    let mut centers = vec![rows[rng.random_range(0..n)].clone()];
    let mut d2: Vec<f64> = rows.iter().map(|r| sq_euclidean(r, &centers[0])).collect();
    while centers.len() < k {
        let total: f64 = d2.iter().sum();
        let pick = if total > 0.0 {
            let mut target = rng.random::<f64>() * total;
            let mut chosen = n - 1;
            for (i, &w) in d2.iter().enumerate() {
                if w > 0.0 && target < w {
                    chosen = i;
                    break;
                }
                target -= w;
            }
            // rounding can run past the end; fall back to the last positive weight
            if d2[chosen] == 0.0 {
                chosen = d2.iter().rposition(|&w| w > 0.0).unwrap_or(chosen);
            }
            chosen
        } else {
            rng.random_range(0..n)
        };
        centers.push(rows[pick].clone());
        for (d, r) in d2.iter_mut().zip(rows) {
            *d = d.min(sq_euclidean(r, &centers[centers.len() - 1]));
        }
    }
    centers
}

/// Moves the point farthest from its centroid into each empty cluster.
fn repair_empty(rows: &[Vec<f64>], assign: &mut [usize], centers: &mut [Vec<f64>], k: usize) {
    loop {
        let mut sizes = vec![0usize; k];
        for &a in assign.iter() {
            sizes[a] += 1;
        }
        let Some(empty) = sizes.iter().position(|&s| s == 0) else {
            return;
        };
        let mut far = None;
        let mut far_d = -1.0;
        for (i, r) in rows.iter().enumerate() {
            if sizes[assign[i]] < 2 {
                continue;
            }
            let d = sq_euclidean(r, &centers[assign[i]]);
            if d > far_d {
                far_d = d;
                far = Some(i);
            }
        }
        let Some(i) = far else { return };
        assign[i] = empty;
        centers[empty] = rows[i].clone();
    }
}

fn lloyd(
    rows: &[Vec<f64>],
    k: usize,
    max_iter: usize,
    rng: &mut ChaCha8Rng,
    seed: u64,
) -> ClusteringResult {
    let mut centers = plus_plus_init(rows, k, rng);
    let mut assign: Vec<usize> = Vec::new();
    let mut trace = Vec::new();
    let mut iterations = 0;
    while iterations < max_iter {
        let mut next: Vec<usize> = rows.iter().map(|r| nearest(r, &centers).0).collect();
        repair_empty(rows, &mut next, &mut centers, k);
        if next == assign {
            break;
        }
        assign = next;
        centers = cluster_means(rows, &assign, k);
        trace.push(wss(rows, &assign, &centers));
        iterations += 1;
    }
    let objective = wss(rows, &assign, &centers);
    ClusteringResult {
        algorithm: Algorithm::Kmeans,
        k,
        assignments: assign,
        centers: Centers::Centroids(centers),
        objective,
        objective_trace: trace,
        iterations,
        seed,
    }
}
