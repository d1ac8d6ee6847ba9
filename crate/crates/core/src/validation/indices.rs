//! Internal cluster-quality indices.

use serde::{Deserialize, Serialize};

use crate::clustering::{cluster_means, euclidean, sq_euclidean, Dissimilarity};
use crate::error::{Error, Result};

/// Number of clusters implied by 0-based ids; every id below it must occur.
pub(crate) fn cluster_count(assignments: &[usize]) -> Result<usize> {
    let n = assignments.len();
    let k = assignments.iter().max().map_or(0, |m| m + 1);
    let mut sizes = vec![0usize; k];
    for &a in assignments {
        sizes[a] += 1;
    }
    if sizes.contains(&0) {
        return Err(Error::InputMismatch(format!(
            "cluster ids 0..{k} are not all used"
        )));
    }
    if k < 2 {
        return Err(Error::InvalidK { k, n });
    }
    Ok(k)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Silhouette {
    pub per_point: Vec<f64>,
    pub average: f64,
}

/// Silhouette widths. Points in singleton clusters score 0, as do points
/// whose `a` and `b` are both 0.
pub fn silhouette(d: &Dissimilarity, assignments: &[usize]) -> Result<Silhouette> {
    if d.len() != assignments.len() {
        return Err(Error::InputMismatch(format!(
            "{} assignments for {} points",
            assignments.len(),
            d.len()
        )));
    }
    let k = cluster_count(assignments)?;
    let n = d.len();
    let mut sizes = vec![0usize; k];
    for &a in assignments {
        sizes[a] += 1;
    }
    let per_point: Vec<f64> = (0..n)
        .map(|i| {
            let own = assignments[i];
            if sizes[own] == 1 {
                return 0.0;
            }
            let mut sums = vec![0.0; k];
            for j in 0..n {
                if j != i {
                    sums[assignments[j]] += d.get(i, j);
                }
            }
            let a = sums[own] / (sizes[own] - 1) as f64;
            let b = (0..k)
                .filter(|&c| c != own)
                .map(|c| sums[c] / sizes[c] as f64)
                .fold(f64::INFINITY, f64::min);
            let denom = a.max(b);
            if denom == 0.0 {
                0.0
            } else {
                (b - a) / denom
            }
        })
        .collect();
    let average = per_point.iter().sum::<f64>() / n as f64;
    Ok(Silhouette { per_point, average })
}

/// Smallest between-cluster distance over the largest cluster diameter.
///
/// Returns `+inf` when every cluster has zero diameter but clusters are
/// separated.
pub fn dunn(d: &Dissimilarity, assignments: &[usize]) -> Result<f64> {
    if d.len() != assignments.len() {
        return Err(Error::InputMismatch(
            "assignment length differs from matrix size".into(),
        ));
    }
    cluster_count(assignments)?;
    let n = d.len();
    let mut separation = f64::INFINITY;
    let mut diameter: f64 = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            let v = d.get(i, j);
            if assignments[i] == assignments[j] {
                diameter = diameter.max(v);
            } else {
                separation = separation.min(v);
            }
        }
    }
    if diameter == 0.0 {
        return Ok(if separation > 0.0 { f64::INFINITY } else { 0.0 });
    }
    Ok(separation / diameter)
}

/// Mean over clusters of the worst `(s_i + s_j) / d(c_i, c_j)` ratio, with
/// `s_i` the mean distance of members to their centroid.
pub fn davies_bouldin(rows: &[Vec<f64>], assignments: &[usize]) -> Result<f64> {
    if rows.len() != assignments.len() {
        return Err(Error::InputMismatch(
            "assignment length differs from row count".into(),
        ));
    }
    let k = cluster_count(assignments)?;
    let centers = cluster_means(rows, assignments, k);
    let mut scatter = vec![0.0; k];
    let mut sizes = vec![0usize; k];
    for (r, &a) in rows.iter().zip(assignments) {
        scatter[a] += euclidean(r, &centers[a]);
        sizes[a] += 1;
    }
    for (s, &n) in scatter.iter_mut().zip(&sizes) {
        *s /= n as f64;
    }
    let mut total = 0.0;
    for i in 0..k {
        let mut worst: f64 = 0.0;
        for j in 0..k {
            if i == j {
                continue;
            }
            let sep = euclidean(&centers[i], &centers[j]);
            if sep == 0.0 {
                return Err(Error::DegenerateCentroids);
            }
            worst = worst.max((scatter[i] + scatter[j]) / sep);
        }
        total += worst;
    }
    Ok(total / k as f64)
}

/// Between-to-within dispersion ratio `[B/(k-1)] / [W/(n-k)]`.
pub fn calinski_harabasz(rows: &[Vec<f64>], assignments: &[usize]) -> Result<f64> {
    if rows.len() != assignments.len() {
        return Err(Error::InputMismatch(
            "assignment length differs from row count".into(),
        ));
    }
    let k = cluster_count(assignments)?;
    let n = rows.len();
    if n <= k {
        return Err(Error::InvalidK { k, n });
    }
    let centers = cluster_means(rows, assignments, k);
    let grand = cluster_means(rows, &vec![0; n], 1).remove(0);
    let mut sizes = vec![0usize; k];
    let mut within = 0.0;
    for (r, &a) in rows.iter().zip(assignments) {
        sizes[a] += 1;
        within += sq_euclidean(r, &centers[a]);
    }
    let between: f64 = centers
        .iter()
        .zip(&sizes)
        .map(|(c, &m)| m as f64 * sq_euclidean(c, &grand))
        .sum();
    let num = between / (k - 1) as f64;
    if within == 0.0 {
        return Ok(if num > 0.0 { f64::INFINITY } else { 0.0 });
    }
    Ok(num / (within / (n - k) as f64))
}
