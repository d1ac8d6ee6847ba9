//! Shared fixtures for unit tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::clustering::Dissimilarity;

/// `per` isotropic Gaussian points around each center, with their blob index.
pub fn blobs<const D: usize>(
    centers: &[[f64; D]],
    per: usize,
    sd: f64,
    seed: u64,
) -> (Vec<Vec<f64>>, Vec<usize>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts = Vec::new();
    let mut labels = Vec::new();
    for (c, center) in centers.iter().enumerate() {
        for _ in 0..per {
            pts.push(
                center
                    .iter()
                    .map(|m| {
                        let z: f64 = StandardNormal.sample(&mut rng);
                        m + sd * z
                    })
                    .collect(),
            );
            labels.push(c);
        }
    }
    (pts, labels)
}

pub fn uniform_points(n: usize, d: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| (0..d).map(|_| rng.random::<f64>()).collect())
        .collect()
}

/// True when two labelings induce the same partition.
pub fn same_partition(a: &[usize], b: &[usize]) -> bool {
    a.len() == b.len()
        && (0..a.len()).all(|i| (0..a.len()).all(|j| (a[i] == a[j]) == (b[i] == b[j])))
}

/// Minimum total dissimilarity over all k-subsets of medoids.
pub fn exhaustive_medoids(d: &Dissimilarity, k: usize) -> f64 {
    fn rec(d: &Dissimilarity, k: usize, start: usize, chosen: &mut Vec<usize>, best: &mut f64) {
        if chosen.len() == k {
            let c: f64 = (0..d.len())
                .map(|i| {
                    chosen
                        .iter()
                        .map(|&m| d.get(i, m))
                        .fold(f64::INFINITY, f64::min)
                })
                .sum();
            if c < *best {
                *best = c;
            }
            return;
        }
        for m in start..d.len() {
            chosen.push(m);
            rec(d, k, m + 1, chosen, best);
            chosen.pop();
        }
    }
    let mut best = f64::INFINITY;
    rec(d, k, 0, &mut Vec::new(), &mut best);
    best
}
