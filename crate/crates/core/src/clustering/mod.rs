//! Feature extraction, distances and partitional clustering.
//!
//! Cluster ids are 0-based in memory; serialized reports shift them to
//! `1..=k`.

mod distance;
mod features;
mod kmeans;
mod medoids;

use serde::{Deserialize, Serialize};

pub use distance::{euclidean, sq_euclidean, Dissimilarity};
pub use features::{
    build_default_feature_matrix, build_feature_matrix, feature_names, series_features,
    standardize, FeatureMatrix, Standardization, SUMMARY_FEATURES,
};
pub use kmeans::{kmeans, kmeans_points, KMeansConfig};
pub use medoids::{clara, clara_default, pam, ClaraConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Kmeans,
    Pam,
    Clara,
}

impl Algorithm {
    pub fn as_str(&self) -> &'static str {
        match self {
            Algorithm::Kmeans => "kmeans",
            Algorithm::Pam => "pam",
            Algorithm::Clara => "clara",
        }
    }
}

impl std::str::FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "kmeans" => Ok(Algorithm::Kmeans),
            "pam" => Ok(Algorithm::Pam),
            "clara" => Ok(Algorithm::Clara),
            other => Err(format!(
                "unknown algorithm `{other}` (expected kmeans, pam or clara)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Centers {
    /// Cluster means, one vector per cluster.
    Centroids(Vec<Vec<f64>>),
    /// Row indices of the medoids.
    Medoids(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusteringResult {
    pub algorithm: Algorithm,
    pub k: usize,
    pub assignments: Vec<usize>,
    pub centers: Centers,
    /// Final WSS (k-means) or total dissimilarity to medoids (PAM, CLARA).
    pub objective: f64,
    pub objective_trace: Vec<f64>,
    pub iterations: usize,
    pub seed: u64,
}

impl ClusteringResult {
    /// Center coordinates, resolving medoid indices against `rows`.
    pub fn center_points(&self, rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
        match &self.centers {
            Centers::Centroids(c) => c.clone(),
            Centers::Medoids(idx) => idx.iter().map(|&i| rows[i].clone()).collect(),
        }
    }

    pub fn cluster_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &a in &self.assignments {
            sizes[a] += 1;
        }
        sizes
    }

    pub fn report(&self, labels: &[String]) -> ClusteringReport {
        ClusteringReport {
            algorithm: self.algorithm,
            k: self.k,
            seed: self.seed,
            objective: self.objective,
            iterations: self.iterations,
            assignments: labels
                .iter()
                .zip(&self.assignments)
                .map(|(label, &c)| Assignment {
                    label: label.clone(),
                    cluster: c + 1,
                })
                .collect(),
            centers: match &self.centers {
                Centers::Centroids(c) => ReportCenters::Centroids(c.clone()),
                Centers::Medoids(idx) => ReportCenters::Medoids(
                    idx.iter()
                        .enumerate()
                        .map(|(c, &i)| Medoid {
                            cluster: c + 1,
                            row: i,
                            label: labels[i].clone(),
                        })
                        .collect(),
                ),
            },
            objective_trace: self.objective_trace.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Assignment {
    pub label: String,
    pub cluster: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Medoid {
    pub cluster: usize,
    pub row: usize,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportCenters {
    Centroids(Vec<Vec<f64>>),
    Medoids(Vec<Medoid>),
}

/// Serializable form of a [`ClusteringResult`] with 1-based cluster ids.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusteringReport {
    pub algorithm: Algorithm,
    pub k: usize,
    pub seed: u64,
    pub objective: f64,
    pub iterations: usize,
    pub assignments: Vec<Assignment>,
    pub centers: ReportCenters,
    pub objective_trace: Vec<f64>,
}

/// Squared-error objective of an assignment around the given centers.
pub fn wss(rows: &[Vec<f64>], assignments: &[usize], centers: &[Vec<f64>]) -> f64 {
    rows.iter()
        .zip(assignments)
        .map(|(r, &c)| sq_euclidean(r, &centers[c]))
        .sum()
}

/// Mean of each cluster; empty clusters get an empty vector.
pub fn cluster_means(rows: &[Vec<f64>], assignments: &[usize], k: usize) -> Vec<Vec<f64>> {
    let d = rows.first().map_or(0, Vec::len);
    let mut sums = vec![vec![0.0; d]; k];
    let mut counts = vec![0usize; k];
    for (r, &c) in rows.iter().zip(assignments) {
        counts[c] += 1;
        for (s, v) in sums[c].iter_mut().zip(r) {
            *s += v;
        }
    }
    sums.into_iter()
        .zip(counts)
        .map(|(s, n)| {
            if n == 0 {
                Vec::new()
            } else {
                s.into_iter().map(|v| v / n as f64).collect()
            }
        })
        .collect()
}
