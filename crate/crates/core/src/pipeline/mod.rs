//! End-to-end drivers behind the command-line tool: every task is a
//! serializable config, and running it writes its artifacts plus a
//! `manifest.json` that reproduces the run.

mod ingest;
mod io;

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::clustering::{
    build_feature_matrix, clara_default, kmeans, pam, standardize, Algorithm, ClusteringResult,
    Dissimilarity, FeatureMatrix,
};
use crate::error::{Error, Result};
use crate::metrics::{
    align_clusters, binary_measures, cluster_auc, multiclass_measures, write_metrics_csv,
    MetricsRow,
};
use crate::polyspectra::{default_weights, NamedWeight};
use crate::series::TimeSeries;
use crate::simgen::{gen_scenario, ScenarioSpec};
use crate::validation::{feature_importance, hopkins, validate, vat_order, ValidationConfig};

pub use ingest::{ingest, parse_date, read_stock_file, StockRecord, MIN_ROWS};
pub use io::{
    read_features_csv, read_json, read_replication_csv, save_features, write_features_csv,
    write_json, write_replication_csv,
};

pub const MANIFEST: &str = "manifest.json";
pub const SCENARIO_FILE: &str = "scenario.json";
/// Environment variable capping worker threads; 0 or unset means automatic.
pub const THREADS_ENV: &str = "POLYCLUST_THREADS";

/// Full pipeline: data, features, validation, clustering and diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    /// Directory of per-stock CSV files.
    pub input_dir: Option<PathBuf>,
    /// Simulated data instead of `input_dir`.
    pub simulate: Option<ScenarioSpec>,
    pub window_days: usize,
    pub k: usize,
    pub algorithm: Algorithm,
    pub seed: u64,
    pub k_range: (usize, usize),
    pub gap_b: usize,
    pub n_init: usize,
    pub hopkins_samples: Option<usize>,
    pub hopkins_reps: usize,
    pub weights: Vec<NamedWeight>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            input_dir: None,
            simulate: None,
            window_days: 1000,
            k: 5,
            algorithm: Algorithm::Kmeans,
            seed: 0,
            k_range: (2, 10),
            gap_b: 100,
            n_init: 25,
            hopkins_samples: None,
            hopkins_reps: 100,
            weights: default_weights(),
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.input_dir.is_some() == self.simulate.is_some() {
            return Err(Error::Config(
                "set exactly one of input_dir and simulate".into(),
            ));
        }
        if self.window_days < MIN_ROWS {
            return Err(Error::Config(format!(
                "window_days must be at least {MIN_ROWS}"
            )));
        }
        let (lo, hi) = self.k_range;
        if lo < 1 || lo > hi {
            return Err(Error::Config(format!("invalid k_range ({lo}, {hi})")));
        }
        if self.k < lo || self.k > hi {
            return Err(Error::Config(format!(
                "k = {} lies outside k_range ({lo}, {hi})",
                self.k
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulateConfig {
    /// Base design; replication `r` (from 0) uses seed `spec.seed + r`.
    pub spec: ScenarioSpec,
    pub reps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeaturesConfig {
    pub input_dir: PathBuf,
    pub window_days: usize,
    #[serde(default = "default_weights")]
    pub weights: Vec<NamedWeight>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterConfig {
    pub features: PathBuf,
    pub k: usize,
    pub algorithm: Algorithm,
    pub seed: u64,
    pub n_init: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidateConfig {
    pub features: PathBuf,
    pub validation: ValidationConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HopkinsConfig {
    pub features: PathBuf,
    pub m: Option<usize>,
    pub reps: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluateConfig {
    pub scenario_dir: PathBuf,
    pub algorithm: Algorithm,
    pub seed: u64,
    pub n_init: usize,
    #[serde(default = "default_weights")]
    pub weights: Vec<NamedWeight>,
}

/// One reproducible unit of work.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "snake_case")]
pub enum Task {
    Run(RunConfig),
    Simulate(SimulateConfig),
    Features(FeaturesConfig),
    Cluster(ClusterConfig),
    Validate(ValidateConfig),
    Hopkins(HopkinsConfig),
    Evaluate(EvaluateConfig),
}

/// Written next to every set of outputs. The output directory is not part
/// of it, so rerunning elsewhere reproduces every file byte for byte.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub library: String,
    pub version: String,
    pub task: Task,
}

impl Manifest {
    pub fn new(task: Task) -> Self {
        Self {
            library: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            task,
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        read_json(path)
    }
}

/// Builds a rayon pool sized by `POLYCLUST_THREADS` (0 or unset: automatic).
pub fn thread_pool_from_env() -> Result<rayon::ThreadPool> {
    let threads = match std::env::var(THREADS_ENV) {
        Ok(v) => v.trim().parse::<usize>().map_err(|_| {
            Error::Config(format!(
                "{THREADS_ENV} must be a non-negative integer, got `{v}`"
            ))
        })?,
        Err(_) => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Config(e.to_string()))
}

/// Runs a task, writing its artifacts and manifest into `out_dir`.
/// Returns the written paths.
pub fn execute(task: &Task, out_dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(out_dir)?;
    let mut written = match task {
        Task::Run(c) => run_pipeline(c, out_dir)?,
        Task::Simulate(c) => simulate(c, out_dir)?,
        Task::Features(c) => features(c, out_dir)?,
        Task::Cluster(c) => cluster(c, out_dir)?,
        Task::Validate(c) => validate_task(c, out_dir)?,
        Task::Hopkins(c) => hopkins_task(c, out_dir)?,
        Task::Evaluate(c) => evaluate(c, out_dir)?,
    };
    let path = out_dir.join(MANIFEST);
    write_json(&path, &Manifest::new(task.clone()))?;
    written.push(path);
    Ok(written)
}

/// Re-executes the task recorded in a manifest.
pub fn rerun(manifest: &Path, out_dir: &Path) -> Result<Vec<PathBuf>> {
    execute(&Manifest::load(manifest)?.task, out_dir)
}

/// Clusters a standardized matrix with the chosen algorithm.
pub fn run_clustering(
    m: &FeatureMatrix,
    algorithm: Algorithm,
    k: usize,
    seed: u64,
    n_init: usize,
) -> Result<ClusteringResult> {
    match algorithm {
        Algorithm::Kmeans => kmeans(m, k, seed, n_init),
        Algorithm::Pam => pam(&Dissimilarity::euclidean(m.rows()), k, seed),
        Algorithm::Clara => clara_default(m, k, seed),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VatOrder {
    /// Row indices of the feature matrix in display order.
    pub order: Vec<usize>,
    pub labels: Vec<String>,
}

fn write_importance(m: &FeatureMatrix, assignments: &[usize], path: &Path) -> Result<()> {
    let scores = feature_importance(m, assignments)?;
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["feature", "f_statistic", "score", "infinite"])?;
    for s in scores {
        w.write_record([
            s.feature,
            crate::serde_num::cell(s.f_statistic),
            crate::serde_num::cell(s.score),
            s.infinite.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn cluster_artifacts(
    m: &FeatureMatrix,
    algorithm: Algorithm,
    k: usize,
    seed: u64,
    n_init: usize,
    out_dir: &Path,
) -> Result<Vec<PathBuf>> {
    let result = run_clustering(m, algorithm, k, seed, n_init)?;
    let clusters = out_dir.join(format!("clusters_{}_k{k}.json", algorithm.as_str()));
    write_json(&clusters, &result.report(m.labels()))?;
    let mut written = vec![clusters];
    if k >= 2 && m.n_rows() > k {
        let path = out_dir.join("feature_importance.csv");
        write_importance(m, &result.assignments, &path)?;
        written.push(path);
    } else {
        log::warn!("feature importance needs 2 <= k < rows; skipped");
    }
    Ok(written)
}

fn validation_artifacts(
    m: &FeatureMatrix,
    cfg: &ValidationConfig,
    out_dir: &Path,
) -> Result<Vec<PathBuf>> {
    let report = validate(m, cfg)?;
    let paths: Vec<PathBuf> = [
        "validation.json",
        "validation.csv",
        "hopkins.json",
        "vat_order.json",
    ]
    .iter()
    .map(|f| out_dir.join(f))
    .collect();
    write_json(&paths[0], &report)?;
    report.write_csv(fs::File::create(&paths[1])?)?;
    write_json(&paths[2], &report.hopkins)?;
    let order = vat_order(&Dissimilarity::euclidean(m.rows()));
    let labels = order.iter().map(|&i| m.labels()[i].clone()).collect();
    write_json(&paths[3], &VatOrder { order, labels })?;
    Ok(paths)
}

fn feature_artifacts(
    series: &[TimeSeries],
    weights: &[NamedWeight],
    out_dir: &Path,
) -> Result<(FeatureMatrix, Vec<PathBuf>)> {
    let raw = build_feature_matrix(series, weights)?;
    let std = standardize(&raw)?;
    let (p_raw, p_std) = (
        out_dir.join("features.csv"),
        out_dir.join("features_standardized.csv"),
    );
    save_features(&raw, &p_raw)?;
    save_features(&std, &p_std)?;
    Ok((std, vec![p_raw, p_std]))
}

/// Runs the full pipeline described by `cfg`.
pub fn run_pipeline(cfg: &RunConfig, out_dir: &Path) -> Result<Vec<PathBuf>> {
    cfg.validate()?;
    fs::create_dir_all(out_dir)?;
    let series: Vec<TimeSeries> = match (&cfg.input_dir, &cfg.simulate) {
        (Some(dir), _) => ingest(dir, cfg.window_days)?.into_values().collect(),
        (_, Some(spec)) => gen_scenario(spec)?.series(),
        _ => unreachable!("checked by validate"),
    };
    let (m, mut written) = feature_artifacts(&series, &cfg.weights, out_dir)?;
    let vcfg = ValidationConfig {
        k_min: cfg.k_range.0,
        k_max: cfg.k_range.1,
        b: cfg.gap_b,
        n_init: cfg.n_init,
        hopkins_samples: cfg.hopkins_samples,
        hopkins_reps: cfg.hopkins_reps,
        seed: cfg.seed,
    };
    written.extend(validation_artifacts(&m, &vcfg, out_dir)?);
    written.extend(cluster_artifacts(
        &m,
        cfg.algorithm,
        cfg.k,
        cfg.seed,
        cfg.n_init,
        out_dir,
    )?);
    Ok(written)
}

/// Replication bookkeeping written as `scenario.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioFile {
    pub spec: ScenarioSpec,
    pub group_names: Vec<String>,
    pub replications: Vec<Replication>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Replication {
    pub rep: usize,
    pub seed: u64,
    pub file: String,
}

fn simulate(cfg: &SimulateConfig, out_dir: &Path) -> Result<Vec<PathBuf>> {
    cfg.spec.validate()?;
    if cfg.reps == 0 {
        return Err(Error::Config("reps must be at least 1".into()));
    }
    let reps: Vec<(Replication, Vec<TimeSeries>, Vec<String>)> = (0..cfg.reps)
        .into_par_iter()
        .map(|rep| {
            let seed = cfg.spec.seed.wrapping_add(rep as u64);
            let spec = ScenarioSpec {
                seed,
                ..cfg.spec.clone()
            };
            let c = gen_scenario(&spec)?;
            let groups = c
                .members
                .iter()
                .map(|m| c.group_names[m.group].clone())
                .collect();
            let file = format!("rep_{:03}.csv", rep + 1);
            Ok((
                Replication {
                    rep: rep + 1,
                    seed,
                    file,
                },
                c.series(),
                groups,
            ))
        })
        .collect::<Result<_>>()?;
    let mut written = Vec::new();
    for (r, series, groups) in &reps {
        let path = out_dir.join(&r.file);
        write_replication_csv(series, groups, &path)?;
        written.push(path);
    }
    let file = ScenarioFile {
        spec: cfg.spec.clone(),
        group_names: (0..cfg.spec.group_sizes.len())
            .map(crate::simgen::group_name)
            .collect(),
        replications: reps.into_iter().map(|r| r.0).collect(),
    };
    let path = out_dir.join(SCENARIO_FILE);
    write_json(&path, &file)?;
    written.push(path);
    Ok(written)
}

fn features(cfg: &FeaturesConfig, out_dir: &Path) -> Result<Vec<PathBuf>> {
    let series: Vec<TimeSeries> = ingest(&cfg.input_dir, cfg.window_days)?
        .into_values()
        .collect();
    Ok(feature_artifacts(&series, &cfg.weights, out_dir)?.1)
}

/// Reads a features CSV and z-scores it (a no-op up to rounding when the
/// file is already standardized).
fn load_standardized(path: &Path) -> Result<FeatureMatrix> {
    standardize(&read_features_csv(path)?)
}

fn cluster(cfg: &ClusterConfig, out_dir: &Path) -> Result<Vec<PathBuf>> {
    let m = load_standardized(&cfg.features)?;
    cluster_artifacts(&m, cfg.algorithm, cfg.k, cfg.seed, cfg.n_init, out_dir)
}

fn validate_task(cfg: &ValidateConfig, out_dir: &Path) -> Result<Vec<PathBuf>> {
    let m = load_standardized(&cfg.features)?;
    validation_artifacts(&m, &cfg.validation, out_dir)
}

fn hopkins_task(cfg: &HopkinsConfig, out_dir: &Path) -> Result<Vec<PathBuf>> {
    let m = load_standardized(&cfg.features)?;
    let h = hopkins(&m, cfg.m, cfg.reps, cfg.seed)?;
    let path = out_dir.join("hopkins.json");
    write_json(&path, &h)?;
    Ok(vec![path])
}

/// Mean measures over replications, written as `metrics_summary.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsSummary {
    pub scenario: u8,
    pub split: String,
    pub reps: usize,
    #[serde(with = "crate::serde_num::float")]
    pub sensitivity: f64,
    #[serde(with = "crate::serde_num::float")]
    pub specificity: f64,
    #[serde(with = "crate::serde_num::float")]
    pub f1: f64,
    #[serde(with = "crate::serde_num::float")]
    pub balanced_accuracy: f64,
    #[serde(with = "crate::serde_num::float")]
    pub auc: f64,
    #[serde(with = "crate::serde_num::float")]
    pub weighted_f1: f64,
    /// Replications with sensitivity, specificity, F1 and balanced accuracy
    /// all exactly 1.
    pub perfect_reps: usize,
}

impl MetricsSummary {
    pub fn from_rows(rows: &[MetricsRow]) -> Option<Self> {
        let first = rows.first()?;
        let mean = |f: fn(&MetricsRow) -> f64| rows.iter().map(f).sum::<f64>() / rows.len() as f64;
        Some(Self {
            scenario: first.scenario,
            split: first.split.clone(),
            reps: rows.len(),
            sensitivity: mean(|r| r.sensitivity),
            specificity: mean(|r| r.specificity),
            f1: mean(|r| r.f1),
            balanced_accuracy: mean(|r| r.balanced_accuracy),
            auc: mean(|r| r.auc),
            weighted_f1: mean(|r| r.weighted_f1),
            perfect_reps: rows
                .iter()
                .filter(|r| {
                    r.sensitivity == 1.0
                        && r.specificity == 1.0
                        && r.f1 == 1.0
                        && r.balanced_accuracy == 1.0
                })
                .count(),
        })
    }
}

/// Features, clustering (k = number of groups) and accuracy measures for
/// one labeled collection.
pub fn evaluate_collection(
    series: &[TimeSeries],
    labels: &[usize],
    n_groups: usize,
    algorithm: Algorithm,
    seed: u64,
    n_init: usize,
    weights: &[NamedWeight],
) -> Result<(MetricsRow, ClusteringResult)> {
    let m = standardize(&build_feature_matrix(series, weights)?)?;
    let result = run_clustering(&m, algorithm, n_groups, seed, n_init)?;
    let conf = align_clusters(labels, &result.assignments)?;
    let auc = cluster_auc(m.rows(), &result, labels)?;
    let multi = multiclass_measures(&conf)?;
    let mut sizes = vec![0usize; n_groups];
    for &l in labels {
        sizes[l] += 1;
    }
    let split = sizes
        .iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join("-");
    let row = if n_groups == 2 {
        let b = binary_measures(&conf)?;
        MetricsRow {
            rep: 0,
            scenario: 0,
            split,
            sensitivity: b.sensitivity,
            specificity: b.specificity,
            f1: b.f1,
            balanced_accuracy: b.balanced_accuracy,
            auc,
            weighted_f1: multi.weighted_f1,
        }
    } else {
        MetricsRow {
            rep: 0,
            scenario: 0,
            split,
            sensitivity: multi.macro_average(|c| c.sensitivity),
            specificity: multi.macro_average(|c| c.specificity),
            f1: multi.macro_average(|c| c.f1),
            balanced_accuracy: multi.macro_average(|c| c.balanced_accuracy),
            auc,
            weighted_f1: multi.weighted_f1,
        }
    };
    Ok((row, result))
}

/// Evaluates every replication listed in `scenario_dir/scenario.json`.
pub fn evaluate_scenario_dir(cfg: &EvaluateConfig) -> Result<Vec<MetricsRow>> {
    let file: ScenarioFile = read_json(&cfg.scenario_dir.join(SCENARIO_FILE))?;
    let n_groups = file.group_names.len();
    file.replications
        .par_iter()
        .map(|r| {
            let path = cfg.scenario_dir.join(&r.file);
            let (series, groups) = read_replication_csv(&path)?;
            let labels = groups
                .iter()
                .map(|g| {
                    file.group_names
                        .iter()
                        .position(|n| n == g)
                        .ok_or_else(|| Error::Schema {
                            file: path.clone(),
                            msg: format!("unknown group label `{g}`"),
                        })
                })
                .collect::<Result<Vec<usize>>>()?;
            let (mut row, _) = evaluate_collection(
                &series,
                &labels,
                n_groups,
                cfg.algorithm,
                cfg.seed,
                cfg.n_init,
                &cfg.weights,
            )?;
            row.rep = r.rep;
            row.scenario = file.spec.scenario;
            Ok(row)
        })
        .collect()
}

fn evaluate(cfg: &EvaluateConfig, out_dir: &Path) -> Result<Vec<PathBuf>> {
    let rows = evaluate_scenario_dir(cfg)?;
    let csv_path = out_dir.join("metrics.csv");
    write_metrics_csv(&rows, fs::File::create(&csv_path)?)?;
    let summary_path = out_dir.join("metrics_summary.json");
    write_json(&summary_path, &MetricsSummary::from_rows(&rows))?;
    Ok(vec![csv_path, summary_path])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn run_config_checks() {
        let mut c = RunConfig::default();
        assert!(c.validate().is_err());
        c.input_dir = Some("x".into());
        c.validate().unwrap();
        c.k = 12;
        assert!(c.validate().is_err());
        c.k = 5;
        c.window_days = 7;
        assert!(c.validate().is_err());
    }

    #[test]
    fn task_json_is_tagged() {
        let t = Task::Hopkins(HopkinsConfig {
            features: "f.csv".into(),
            m: Some(5),
            reps: 10,
            seed: 3,
        });
        let s = serde_json::to_string(&t).unwrap();
        assert!(s.starts_with(r#"{"command":"hopkins""#));
        assert_eq!(serde_json::from_str::<Task>(&s).unwrap(), t);
    }

    #[test]
    fn partial_run_config_uses_defaults() {
        let c: RunConfig = serde_json::from_str(r#"{"input_dir": "data", "k": 4}"#).unwrap();
        assert_eq!(c.k, 4);
        assert_eq!(c.window_days, 1000);
        assert_eq!(c.weights.len(), 8);
    }
}
