//! Accuracy measures for clusterings of labeled (simulated) data.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::clustering::{euclidean, ClusteringResult};
use crate::error::{Error, Result};
use crate::serde_num::cell;

/// Confusion counts after matching clusters to true labels.
///
/// Rows are true labels. Column `c < k_true` holds the cluster mapped to
/// label `c`; clusters left unmatched (when there are more clusters than
/// labels) follow in increasing cluster id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlignedConfusion {
    pub matrix: Vec<Vec<usize>>,
    /// `mapping[cluster] = Some(label)` for matched clusters.
    pub mapping: Vec<Option<usize>>,
    pub n: usize,
}

impl AlignedConfusion {
    pub fn k_true(&self) -> usize {
        self.matrix.len()
    }

    pub fn accuracy(&self) -> f64 {
        let diag: usize = (0..self.k_true()).map(|c| self.matrix[c][c]).sum();
        diag as f64 / self.n as f64
    }

    /// Cluster matched to `label`, if any.
    pub fn cluster_for(&self, label: usize) -> Option<usize> {
        self.mapping.iter().position(|&m| m == Some(label))
    }
}

/// Maximum-weight assignment of rows to columns on a square matrix
/// (Hungarian method with potentials). Returns `row_of[col]`.
fn hungarian_max(w: &[Vec<i64>]) -> Vec<usize> {
    let n = w.len();
    let big = w.iter().flatten().copied().max().unwrap_or(0);
    // minimize big - w
    let cost = |i: usize, j: usize| big - w[i][j];
    let inf = i64::MAX / 4;
    let mut u = vec![0i64; n + 1];
    let mut v = vec![0i64; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![inf; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = inf;
            let mut j1 = 0;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    (1..=n).map(|j| p[j] - 1).collect()
}

/// Matches cluster ids to true labels so that the number of correctly
/// labeled points is maximal.
pub fn align_clusters(true_labels: &[usize], assignments: &[usize]) -> Result<AlignedConfusion> {
    if true_labels.len() != assignments.len() {
        return Err(Error::InputMismatch(format!(
            "{} labels for {} assignments",
            true_labels.len(),
            assignments.len()
        )));
    }
    let n = true_labels.len();
    if n == 0 {
        return Err(Error::InputMismatch("no observations".into()));
    }
    let kt = true_labels.iter().max().map_or(0, |m| m + 1);
    let kp = assignments.iter().max().map_or(0, |m| m + 1);
    let size = kt.max(kp);
    // counts[label][cluster]
    let mut counts = vec![vec![0i64; size]; size];
    for (&t, &a) in true_labels.iter().zip(assignments) {
        counts[t][a] += 1;
    }
    let label_of_cluster = hungarian_max(&counts);
    let mapping: Vec<Option<usize>> = (0..kp)
        .map(|c| Some(label_of_cluster[c]).filter(|&l| l < kt))
        .collect();
    let mut columns: Vec<usize> = (0..kt)
        .map(|l| {
            mapping
                .iter()
                .position(|&m| m == Some(l))
                .unwrap_or(usize::MAX)
        })
        .collect();
    columns.extend((0..kp).filter(|&c| mapping[c].is_none()));
    let matrix = (0..kt)
        .map(|l| {
            columns
                .iter()
                .map(|&c| {
                    if c == usize::MAX {
                        0
                    } else {
                        counts[l][c] as usize
                    }
                })
                .collect()
        })
        .collect();
    Ok(AlignedConfusion { matrix, mapping, n })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinaryMeasures {
    #[serde(with = "crate::serde_num::float")]
    pub sensitivity: f64,
    #[serde(with = "crate::serde_num::float")]
    pub specificity: f64,
    #[serde(with = "crate::serde_num::float")]
    pub f1: f64,
    #[serde(with = "crate::serde_num::float")]
    pub balanced_accuracy: f64,
    /// Reasons for any NaN field.
    pub warnings: Vec<String>,
}

fn ratio(num: usize, den: usize, what: &str, warnings: &mut Vec<String>) -> f64 {
    if den == 0 {
        warnings.push(format!("{what} undefined: zero denominator"));
        f64::NAN
    } else {
        num as f64 / den as f64
    }
}

fn one_vs_rest(conf: &AlignedConfusion, c: usize, warnings: &mut Vec<String>) -> BinaryMeasures {
    let m = &conf.matrix;
    let tp = m[c][c];
    let row: usize = m[c].iter().sum();
    let col: usize = m.iter().map(|r| r[c]).sum();
    let fn_ = row - tp;
    let fp = col - tp;
    let tn = conf.n - tp - fn_ - fp;
    let mut w = Vec::new();
    let sensitivity = ratio(tp, tp + fn_, "sensitivity", &mut w);
    let specificity = ratio(tn, tn + fp, "specificity", &mut w);
    let f1 = ratio(2 * tp, 2 * tp + fp + fn_, "f1", &mut w);
    warnings.extend(w.iter().map(|s| format!("class {}: {s}", c + 1)));
    BinaryMeasures {
        sensitivity,
        specificity,
        f1,
        balanced_accuracy: (sensitivity + specificity) / 2.0,
        warnings: w,
    }
}

/// Sensitivity, specificity, F1 and balanced accuracy with label 0 as the
/// positive class.
pub fn binary_measures(conf: &AlignedConfusion) -> Result<BinaryMeasures> {
    if conf.k_true() != 2 {
        return Err(Error::InputMismatch(format!(
            "binary measures need 2 classes, got {}",
            conf.k_true()
        )));
    }
    let mut warnings = Vec::new();
    let mut m = one_vs_rest(conf, 0, &mut warnings);
    m.warnings = warnings;
    Ok(m)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MulticlassMeasures {
    /// One-vs-rest measures per true label.
    pub per_class: Vec<BinaryMeasures>,
    pub class_sizes: Vec<usize>,
    #[serde(with = "crate::serde_num::float")]
    pub weighted_f1: f64,
    pub warnings: Vec<String>,
}

impl MulticlassMeasures {
    /// Unweighted mean of a per-class field.
    pub fn macro_average(&self, field: impl Fn(&BinaryMeasures) -> f64) -> f64 {
        self.per_class.iter().map(field).sum::<f64>() / self.per_class.len() as f64
    }
}

/// One-vs-rest measures per class and the size-weighted F1.
pub fn multiclass_measures(conf: &AlignedConfusion) -> Result<MulticlassMeasures> {
    let k = conf.k_true();
    if k < 2 {
        return Err(Error::InputMismatch(format!(
            "need at least 2 classes, got {k}"
        )));
    }
    let mut warnings = Vec::new();
    let per_class: Vec<BinaryMeasures> = (0..k)
        .map(|c| one_vs_rest(conf, c, &mut warnings))
        .collect();
    let class_sizes: Vec<usize> = conf.matrix.iter().map(|r| r.iter().sum()).collect();
    let weighted_f1 = per_class
        .iter()
        .zip(&class_sizes)
        .filter(|(_, &s)| s > 0)
        .map(|(m, &s)| s as f64 / conf.n as f64 * m.f1)
        .sum();
    Ok(MulticlassMeasures {
        per_class,
        class_sizes,
        weighted_f1,
        warnings,
    })
}

/// Area under the ROC curve as the Mann-Whitney statistic, ties counted half.
pub fn auc(positive: &[bool], scores: &[f64]) -> Result<f64> {
    if positive.len() != scores.len() {
        return Err(Error::InputMismatch(format!(
            "{} labels for {} scores",
            positive.len(),
            scores.len()
        )));
    }
    if scores.iter().any(|s| !s.is_finite()) {
        return Err(Error::NonFinite("scores".into()));
    }
    let n1 = positive.iter().filter(|&&p| p).count();
    let n0 = positive.len() - n1;
    if n1 == 0 || n0 == 0 {
        return Err(Error::UndefinedAuc("labels contain a single class".into()));
    }
    let mut idx: Vec<usize> = (0..scores.len()).collect();
    idx.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    // twice the number of (positive, negative) pairs ordered correctly
    let mut doubled: u128 = 0;
    let mut negatives_below: u128 = 0;
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j < idx.len() && scores[idx[j]] == scores[idx[i]] {
            j += 1;
        }
        let pos = idx[i..j].iter().filter(|&&t| positive[t]).count() as u128;
        let neg = (j - i) as u128 - pos;
        doubled += pos * (2 * negatives_below + neg);
        negatives_below += neg;
        i = j;
    }
    Ok((doubled as f64 / 2.0) / (n1 as f64 * n0 as f64))
}

/// AUC of a hard clustering, scored by distances to aligned centers.
///
/// Two classes: `d(x, c_neg) / (d(x, c_pos) + d(x, c_neg))` with label 0
/// positive. More classes: per-class AUC of the normalized inverse distance
/// to that class's center, averaged over classes.
pub fn cluster_auc(
    rows: &[Vec<f64>],
    result: &ClusteringResult,
    true_labels: &[usize],
) -> Result<f64> {
    if rows.len() != true_labels.len() {
        return Err(Error::InputMismatch(format!(
            "{} rows for {} labels",
            rows.len(),
            true_labels.len()
        )));
    }
    let conf = align_clusters(true_labels, &result.assignments)?;
    let centers = result.center_points(rows);
    let k = conf.k_true();
    let center: Vec<Option<&Vec<f64>>> = (0..k)
        .map(|l| conf.cluster_for(l).map(|c| &centers[c]))
        .collect();
    if k == 2 {
        let (Some(pos), Some(neg)) = (center[0], center[1]) else {
            return Err(Error::UndefinedAuc(
                "a class has no matching cluster".into(),
            ));
        };
        let scores: Vec<f64> = rows
            .iter()
            .map(|x| {
                let (dp, dn) = (euclidean(x, pos), euclidean(x, neg));
                if dp + dn == 0.0 {
                    0.5
                } else {
                    dn / (dp + dn)
                }
            })
            .collect();
        let positive: Vec<bool> = true_labels.iter().map(|&l| l == 0).collect();
        return auc(&positive, &scores);
    }
    let scores: Vec<Vec<f64>> = rows
        .iter()
        .map(|x| {
            let d: Vec<Option<f64>> = center.iter().map(|c| c.map(|c| euclidean(x, c))).collect();
            let zeros = d.iter().filter(|v| **v == Some(0.0)).count();
            if zeros > 0 {
                return d
                    .iter()
                    .map(|v| {
                        if *v == Some(0.0) {
                            1.0 / zeros as f64
                        } else {
                            0.0
                        }
                    })
                    .collect();
            }
            let inv: Vec<f64> = d.iter().map(|v| v.map_or(0.0, |v| 1.0 / v)).collect();
            let total: f64 = inv.iter().sum();
            inv.iter().map(|v| v / total).collect()
        })
        .collect();
    let mut sum = 0.0;
    for c in 0..k {
        let positive: Vec<bool> = true_labels.iter().map(|&l| l == c).collect();
        let s: Vec<f64> = scores.iter().map(|r| r[c]).collect();
        sum += auc(&positive, &s)?;
    }
    Ok(sum / k as f64)
}

/// One replication of a simulation study.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsRow {
    pub rep: usize,
    pub scenario: u8,
    /// Group sizes joined with `-`, e.g. `25-25`.
    pub split: String,
    pub sensitivity: f64,
    pub specificity: f64,
    pub f1: f64,
    pub balanced_accuracy: f64,
    pub auc: f64,
    /// Equal to `f1` for two classes.
    pub weighted_f1: f64,
}

/// Writes replication rows; multi-class rows carry macro averages.
pub fn write_metrics_csv<W: Write>(rows: &[MetricsRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "rep",
        "scenario",
        "split",
        "sensitivity",
        "specificity",
        "f1",
        "balanced_accuracy",
        "auc",
        "weighted_f1",
    ])?;
    for r in rows {
        w.write_record([
            r.rep.to_string(),
            r.scenario.to_string(),
            r.split.clone(),
            cell(r.sensitivity),
            cell(r.specificity),
            cell(r.f1),
            cell(r.balanced_accuracy),
            cell(r.auc),
            cell(r.weighted_f1),
        ])?;
    }
    w.flush()?;
    Ok(())
}
