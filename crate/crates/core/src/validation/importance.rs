use serde::{Deserialize, Serialize};

use super::indices::cluster_count;
use crate::clustering::FeatureMatrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureScore {
    pub feature: String,
    /// One-way ANOVA F of the feature against the cluster labels.
    #[serde(with = "crate::serde_num::float")]
    pub f_statistic: f64,
    /// Share of the total F; sums to 1 across features unless every F is 0.
    pub score: f64,
    /// Set when the feature has zero within-cluster variance.
    pub infinite: bool,
}

/// Per-feature importance as normalized ANOVA F statistics. Features with
/// zero within-cluster spread get an infinite F and share the whole score.
pub fn feature_importance(m: &FeatureMatrix, assignments: &[usize]) -> Result<Vec<FeatureScore>> {
    if assignments.len() != m.n_rows() {
        return Err(Error::InputMismatch(format!(
            "{} assignments for {} rows",
            assignments.len(),
            m.n_rows()
        )));
    }
    let k = cluster_count(assignments)?;
    let n = m.n_rows();
    if n <= k {
        return Err(Error::InvalidK { k, n });
    }
    let mut sizes = vec![0usize; k];
    for &a in assignments {
        sizes[a] += 1;
    }
    let f: Vec<f64> = (0..m.n_cols())
        .map(|j| {
            let col = m.column(j);
            let grand = col.iter().sum::<f64>() / n as f64;
            let mut sums = vec![0.0; k];
            for (v, &a) in col.iter().zip(assignments) {
                sums[a] += v;
            }
            let means: Vec<f64> = sums
                .iter()
                .zip(&sizes)
                .map(|(s, &c)| s / c as f64)
                .collect();
            let between: f64 = means
                .iter()
                .zip(&sizes)
                .map(|(mu, &c)| c as f64 * (mu - grand).powi(2))
                .sum();
            let within: f64 = col
                .iter()
                .zip(assignments)
                .map(|(v, &a)| (v - means[a]).powi(2))
                .sum();
            // relative floors keep rounding noise from producing huge F values
            let scale = col
                .iter()
                .map(|v| v * v)
                .sum::<f64>()
                .max(f64::MIN_POSITIVE);
            if between <= 1e-24 * scale {
                0.0
            } else if within <= 1e-24 * scale {
                f64::INFINITY
            } else {
                (between / (k - 1) as f64) / (within / (n - k) as f64)
            }
        })
        .collect();
    let n_inf = f.iter().filter(|v| v.is_infinite()).count();
    let total: f64 = f.iter().filter(|v| v.is_finite()).sum();
    Ok(m.names()
        .iter()
        .zip(&f)
        .map(|(name, &fj)| {
            let score = if n_inf > 0 {
                if fj.is_infinite() {
                    1.0 / n_inf as f64
                } else {
                    0.0
                }
            } else if total > 0.0 {
                fj / total
            } else {
                0.0
            };
            if fj.is_infinite() {
                log::warn!("feature `{name}` has zero within-cluster variance; F is infinite");
            }
            FeatureScore {
                feature: name.clone(),
                f_statistic: fj,
                score,
                infinite: fj.is_infinite(),
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::uniform_points;

    fn matrix(rows: Vec<Vec<f64>>) -> FeatureMatrix {
        let names = (0..rows[0].len()).map(|j| format!("f{j}")).collect();
        let labels = (0..rows.len()).map(|i| format!("r{i}")).collect();
        FeatureMatrix::new(labels, names, rows).unwrap()
    }

    #[test]
    fn separating_feature_dominates_and_constant_scores_zero() {
        let noise = uniform_points(20, 2, 3);
        let assign: Vec<usize> = (0..20).map(|i| i / 10).collect();
        let rows: Vec<Vec<f64>> = noise
            .iter()
            .zip(&assign)
            .map(|(r, &a)| vec![r[0], 5.0, a as f64 * 10.0 + r[1]])
            .collect();
        let s = feature_importance(&matrix(rows), &assign).unwrap();
        assert_eq!(s[1].score, 0.0);
        assert!(s[2].score > s[0].score);
        assert!((s.iter().map(|x| x.score).sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_within_variance_is_flagged() {
        let rows: Vec<Vec<f64>> = (0..6)
            .map(|i| vec![(i / 3) as f64, i as f64 * 0.37 % 1.0])
            .collect();
        let assign: Vec<usize> = (0..6).map(|i| i / 3).collect();
        let s = feature_importance(&matrix(rows), &assign).unwrap();
        assert!(s[0].infinite);
        assert_eq!(s[0].score, 1.0);
        assert_eq!(s[1].score, 0.0);
    }

    #[test]
    fn matches_definitional_f() {
        let rows = uniform_points(15, 1, 8);
        let assign: Vec<usize> = (0..15).map(|i| i % 3).collect();
        let s = feature_importance(&matrix(rows.clone()), &assign).unwrap();
        let x: Vec<f64> = rows.iter().map(|r| r[0]).collect();
        let g = x.iter().sum::<f64>() / 15.0;
        let mut ssb = 0.0;
        let mut ssw = 0.0;
        for c in 0..3 {
            let xs: Vec<f64> = x
                .iter()
                .zip(&assign)
                .filter(|(_, &a)| a == c)
                .map(|(v, _)| *v)
                .collect();
            let mu = xs.iter().sum::<f64>() / xs.len() as f64;
            ssb += xs.len() as f64 * (mu - g) * (mu - g);
            ssw += xs.iter().map(|v| (v - mu) * (v - mu)).sum::<f64>();
        }
        let f = (ssb / 2.0) / (ssw / 12.0);
        assert!((s[0].f_statistic - f).abs() < 1e-9 * f);
    }
}
