use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyspectra::{default_weights, polyspectral_means, NamedWeight, Weight};
use crate::series::{difference, dominant_period, mean, TimeSeries};

/// Names of the four summary features appended after the polyspectral means.
pub const SUMMARY_FEATURES: [&str; 4] = ["period", "mean_diff", "max_diff", "diff_end_start"];

/// Column means and standard deviations used to z-score a matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardization {
    pub means: Vec<f64>,
    pub sds: Vec<f64>,
}

/// One row per series, one named column per feature.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureMatrix {
    labels: Vec<String>,
    names: Vec<String>,
    rows: Vec<Vec<f64>>,
    standardization: Option<Standardization>,
}

impl FeatureMatrix {
    pub fn new(labels: Vec<String>, names: Vec<String>, rows: Vec<Vec<f64>>) -> Result<Self> {
        if labels.len() != rows.len() {
            return Err(Error::InputMismatch(format!(
                "{} labels for {} rows",
                labels.len(),
                rows.len()
            )));
        }
        for (label, row) in labels.iter().zip(&rows) {
            if row.len() != names.len() {
                return Err(Error::InputMismatch(format!(
                    "row `{label}` has {} values for {} columns",
                    row.len(),
                    names.len()
                )));
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite(label.clone()));
            }
        }
        Ok(Self {
            labels,
            names,
            rows,
            standardization: None,
        })
    }

    /// Unlabeled points, rows named `0..n`.
    pub fn from_points(rows: Vec<Vec<f64>>) -> Result<Self> {
        let d = rows.first().map_or(0, Vec::len);
        let labels = (0..rows.len()).map(|i| i.to_string()).collect();
        let names = (0..d).map(|j| format!("x{j}")).collect();
        Self::new(labels, names, rows)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.names.len()
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r[j]).collect()
    }

    pub fn is_standardized(&self) -> bool {
        self.standardization.is_some()
    }

    pub fn standardization(&self) -> Option<&Standardization> {
        self.standardization.as_ref()
    }

    /// Subset of rows, keeping column names and standardization record.
    pub fn select_rows(&self, idx: &[usize]) -> Self {
        Self {
            labels: idx.iter().map(|&i| self.labels[i].clone()).collect(),
            names: self.names.clone(),
            rows: idx.iter().map(|&i| self.rows[i].clone()).collect(),
            standardization: self.standardization.clone(),
        }
    }
}

/// Polyspectral and summary features of one raw series.
pub fn series_features(series: &TimeSeries, weights: &[NamedWeight]) -> Result<Vec<f64>> {
    series.require_len(4)?;
    let diff = difference(series)?;
    let refs: Vec<&dyn Weight> = weights.iter().map(|w| &w.weight as &dyn Weight).collect();
    let mut row: Vec<f64> = polyspectral_means(&diff, &refs)?
        .into_iter()
        .map(|e| e.value)
        .collect();
    let v = diff.values();
    row.push(dominant_period(&diff)?);
    row.push(mean(v));
    row.push(v.iter().copied().fold(f64::NEG_INFINITY, f64::max));
    row.push(v[v.len() - 1] - v[0]);
    Ok(row)
}

/// Feature names for a weight set, in column order.
pub fn feature_names(weights: &[NamedWeight]) -> Vec<String> {
    weights
        .iter()
        .map(|w| w.name.clone())
        .chain(SUMMARY_FEATURES.iter().map(|s| s.to_string()))
        .collect()
}

/// Differences each series once and extracts one feature row per series.
///
/// Rows are computed in parallel; the first failing series aborts the build
/// and is named in the error.
pub fn build_feature_matrix(
    series: &[TimeSeries],
    weights: &[NamedWeight],
) -> Result<FeatureMatrix> {
    let rows: Vec<Vec<f64>> = series
        .par_iter()
        .map(|s| {
            series_features(s, weights).map_err(|e| Error::Row {
                label: s.label().to_string(),
                source: Box::new(e),
            })
        })
        .collect::<Result<_>>()?;
    FeatureMatrix::new(
        series.iter().map(|s| s.label().to_string()).collect(),
        feature_names(weights),
        rows,
    )
}

/// [`build_feature_matrix`] with the default eight weights.
pub fn build_default_feature_matrix(series: &[TimeSeries]) -> Result<FeatureMatrix> {
    build_feature_matrix(series, &default_weights())
}

/// Z-scores every column (sample standard deviation, `n - 1`).
pub fn standardize(m: &FeatureMatrix) -> Result<FeatureMatrix> {
    let n = m.n_rows();
    if n < 2 {
        return Err(Error::InvalidSampleSize { m: n, n });
    }
    let mut means = Vec::with_capacity(m.n_cols());
    let mut sds = Vec::with_capacity(m.n_cols());
    for j in 0..m.n_cols() {
        let col = m.column(j);
        let mu = mean(&col);
        let sd = (col.iter().map(|v| (v - mu).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt();
        if !(sd > 1e-12 * mu.abs()) {
            return Err(Error::ConstantFeature(m.names[j].clone()));
        }
        means.push(mu);
        sds.push(sd);
    }
    let rows = m
        .rows
        .iter()
        .map(|r| {
            r.iter()
                .enumerate()
                .map(|(j, v)| (v - means[j]) / sds[j])
                .collect()
        })
        .collect();
    Ok(FeatureMatrix {
        labels: m.labels.clone(),
        names: m.names.clone(),
        rows,
        standardization: Some(Standardization { means, sds }),
    })
}
