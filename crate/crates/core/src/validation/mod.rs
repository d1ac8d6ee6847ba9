//! Cluster tendency, cluster-count diagnostics, VAT ordering and feature
//! importance.

mod gap;
mod hopkins;
mod importance;
mod indices;
mod vat;

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::clustering::{kmeans_points, Dissimilarity, FeatureMatrix, KMeansConfig};
use crate::error::{Error, Result};
use crate::serde_num::opt_cell;

pub use gap::{elbow, gap_statistic, wss_curve, GapPoint, GapResult};
pub use hopkins::{default_hopkins_samples, hopkins, HopkinsResult};
pub use importance::{feature_importance, FeatureScore};
pub use indices::{calinski_harabasz, davies_bouldin, dunn, silhouette, Silhouette};
pub use vat::{reorder, vat_order};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValidationConfig {
    pub k_min: usize,
    pub k_max: usize,
    /// Number of gap reference sets.
    pub b: usize,
    /// k-means restarts per fit.
    pub n_init: usize,
    pub hopkins_samples: Option<usize>,
    pub hopkins_reps: usize,
    pub seed: u64,
}

impl Default for ValidationConfig {
    fn default() -> Self {
        Self {
            k_min: 2,
            k_max: 10,
            b: 100,
            n_init: 25,
            hopkins_samples: None,
            hopkins_reps: 100,
            seed: 0,
        }
    }
}

/// Diagnostics for one k. Indices that are undefined at that k (k = 1, or
/// coincident centroids) are `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KDiagnostics {
    pub wss: f64,
    #[serde(with = "crate::serde_num::opt_float")]
    pub silhouette_avg: Option<f64>,
    #[serde(with = "crate::serde_num::float")]
    pub gap: f64,
    pub gap_se: f64,
    #[serde(with = "crate::serde_num::opt_float")]
    pub dunn: Option<f64>,
    #[serde(with = "crate::serde_num::opt_float")]
    pub davies_bouldin: Option<f64>,
    #[serde(with = "crate::serde_num::opt_float")]
    pub calinski_harabasz: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecommendedK {
    pub elbow: Option<usize>,
    pub silhouette: Option<usize>,
    pub gap_rule: usize,
    pub dunn: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub hopkins: HopkinsResult,
    pub per_k: BTreeMap<usize, KDiagnostics>,
    pub recommended_k: RecommendedK,
    pub seed: u64,
    #[serde(rename = "B")]
    pub b: usize,
    pub k_range: (usize, usize),
}

impl ValidationReport {
    /// Per-k curves as CSV: `k,wss,silhouette,gap,gap_se,dunn,db,ch`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "k",
            "wss",
            "silhouette",
            "gap",
            "gap_se",
            "dunn",
            "db",
            "ch",
        ])?;
        for (k, d) in &self.per_k {
            w.write_record([
                k.to_string(),
                opt_cell(Some(d.wss)),
                opt_cell(d.silhouette_avg),
                opt_cell(Some(d.gap)),
                opt_cell(Some(d.gap_se)),
                opt_cell(d.dunn),
                opt_cell(d.davies_bouldin),
                opt_cell(d.calinski_harabasz),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

fn argmax(values: impl Iterator<Item = (usize, Option<f64>)>) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (k, v) in values {
        if let Some(v) = v.filter(|v| !v.is_nan()) {
            if best.is_none_or(|b| v > b.1) {
                best = Some((k, v));
            }
        }
    }
    best.map(|b| b.0)
}

fn defined(r: Result<f64>) -> Result<Option<f64>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::DegenerateCentroids) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Runs every cluster-count diagnostic over `k_min..=k_max` on a
/// (standardized) feature matrix.
pub fn validate(m: &FeatureMatrix, cfg: &ValidationConfig) -> Result<ValidationReport> {
    if cfg.k_min == 0 || cfg.k_min > cfg.k_max {
        return Err(Error::Config(format!(
            "invalid k range {}..={}",
            cfg.k_min, cfg.k_max
        )));
    }
    if !m.is_standardized() {
        log::warn!("validating an unstandardized feature matrix");
    }
    let hopkins = hopkins(m, cfg.hopkins_samples, cfg.hopkins_reps, cfg.seed)?;
    let gap = gap_statistic(m, cfg.k_min..=cfg.k_max, cfg.b, cfg.seed, cfg.n_init)?;
    let d = Dissimilarity::euclidean(m.rows());
    let kcfg = KMeansConfig::new(cfg.seed, cfg.n_init);
    let mut per_k = BTreeMap::new();
    for k in cfg.k_min..=cfg.k_max {
        let fit = kmeans_points(m.rows(), k, &kcfg)?;
        let g = gap.at(k).expect("gap covers the range");
        let a = &fit.assignments;
        let diag = if k >= 2 {
            KDiagnostics {
                wss: fit.objective,
                silhouette_avg: Some(silhouette(&d, a)?.average),
                gap: g.gap,
                gap_se: g.se,
                dunn: Some(dunn(&d, a)?),
                davies_bouldin: defined(davies_bouldin(m.rows(), a))?,
                calinski_harabasz: if k < m.n_rows() {
                    Some(calinski_harabasz(m.rows(), a)?)
                } else {
                    None
                },
            }
        } else {
            KDiagnostics {
                wss: fit.objective,
                silhouette_avg: None,
                gap: g.gap,
                gap_se: g.se,
                dunn: None,
                davies_bouldin: None,
                calinski_harabasz: None,
            }
        };
        per_k.insert(k, diag);
    }
    let curve: Vec<(usize, f64)> = per_k.iter().map(|(&k, d)| (k, d.wss)).collect();
    let recommended_k = RecommendedK {
        elbow: elbow(&curve),
        silhouette: argmax(per_k.iter().map(|(&k, d)| (k, d.silhouette_avg))),
        gap_rule: gap.recommended_k,
        dunn: argmax(per_k.iter().map(|(&k, d)| (k, d.dunn))),
    };
    Ok(ValidationReport {
        hopkins,
        per_k,
        recommended_k,
        seed: cfg.seed,
        b: cfg.b,
        k_range: (cfg.k_min, cfg.k_max),
    })
}
