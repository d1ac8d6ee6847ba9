//! Acceptance suite. Prints one `[PASS]` / `[FAIL]` line per criterion and
//! exits non-zero if any gating criterion fails.
//!
//! Optional real-data checks run when `POLYCLUST_NIFTY_DIR` points at a
//! directory of per-stock CSV files.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use polyclust::clustering::Algorithm;
use polyclust::clustering::{kmeans_points, pam, Dissimilarity, FeatureMatrix, KMeansConfig};
use polyclust::metrics::{align_clusters, auc};
use polyclust::pipeline::{
    evaluate_collection, execute, ingest, rerun, EvaluateConfig, MetricsSummary, RunConfig,
    SimulateConfig, Task, MANIFEST,
};
use polyclust::polyspectra::{
    brute_force_polyspectral_mean, default_weights, polyspectral_mean, WeightFunction,
};
use polyclust::series::TimeSeries;
use polyclust::simgen::{gen_scenario, ScenarioSpec};
use polyclust::validation::{
    calinski_harabasz, davies_bouldin, dunn, gap_statistic, hopkins, silhouette,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

const REPS: usize = 20;

struct Outcome {
    id: &'static str,
    gating: bool,
    pass: bool,
    detail: String,
}

fn outcome(id: &'static str, pass: bool, detail: String) -> Outcome {
    Outcome {
        id,
        gating: true,
        pass,
        detail,
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian_series(len: usize, seed: u64) -> TimeSeries {
    let mut r = rng(seed);
    // skewed values so bispectral means are not all near zero
    let v = (0..len)
        .map(|_| {
            let z: f64 = StandardNormal.sample(&mut r);
            z + 0.5 * z * z + r.random_range(-1.0..1.0)
        })
        .collect();
    TimeSeries::new(format!("s{seed}"), v).unwrap()
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn ac1() -> Outcome {
    let start = Instant::now();
    let weights = default_weights();
    let mut worst: f64 = 0.0;
    let mut checked = 0;
    for len in [8, 16, 32] {
        for i in 0..50u64 {
            let s = gaussian_series(len, 1000 * len as u64 + i);
            for w in &weights {
                let fast = polyspectral_mean(&s, &w.weight).unwrap().value;
                let slow = brute_force_polyspectral_mean(&s, &w.weight).unwrap().value;
                worst = worst.max(rel_err(fast, slow));
                checked += 1;
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        "AC1 estimator equals direct evaluation",
        worst <= 1e-9 && secs < 10.0,
        format!(
            "{checked} comparisons, max rel err {worst:.2e} (tol 1e-9), {secs:.2}s (limit 10s)"
        ),
    )
}

fn ac2() -> Outcome {
    let mut worst: f64 = 0.0;
    for i in 0..100u64 {
        let len = 8 + (i as usize % 57);
        let s = gaussian_series(len, 5000 + i);
        let x = s.values();
        let mean = x.iter().sum::<f64>() / len as f64;
        let gamma0 = x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / len as f64;
        let est = polyspectral_mean(&s, &WeightFunction::Unit { order: 1 })
            .unwrap()
            .value;
        worst = worst.max(rel_err(est, 2.0 * PI * gamma0));
    }
    outcome(
        "AC2 unit spectral mean equals 2*pi*gamma(0)",
        worst <= 1e-9,
        format!("100 series, max rel err {worst:.2e} (tol 1e-9)"),
    )
}

fn ac3() -> Outcome {
    let mut worst_shift: f64 = 0.0;
    let mut worst_scale: f64 = 0.0;
    let weights = [
        WeightFunction::Unit { order: 1 },
        WeightFunction::Triangular,
        WeightFunction::Unit { order: 2 },
        WeightFunction::DiscIndicator { r: PI / 2.0 },
        WeightFunction::CosineSum,
    ];
    for i in 0..30u64 {
        let s = gaussian_series(16 + (i as usize % 3) * 8, 9000 + i);
        let alpha = 0.3 + 2.0 * (i as f64 / 30.0);
        let shifted =
            TimeSeries::new("shift", s.values().iter().map(|v| v + 7.5).collect()).unwrap();
        let scaled =
            TimeSeries::new("scale", s.values().iter().map(|v| v * alpha).collect()).unwrap();
        for w in &weights {
            let base = polyspectral_mean(&s, w).unwrap();
            let k = base.order as i32;
            worst_shift = worst_shift.max(rel_err(
                polyspectral_mean(&shifted, w).unwrap().value,
                base.value,
            ));
            worst_scale = worst_scale.max(rel_err(
                polyspectral_mean(&scaled, w).unwrap().value,
                alpha.powi(k + 1) * base.value,
            ));
        }
    }
    outcome(
        "AC3 shift invariance and scaling law (k = 1, 2)",
        worst_shift <= 1e-9 && worst_scale <= 1e-9,
        format!("max rel err shift {worst_shift:.2e}, scale {worst_scale:.2e} (tol 1e-9)"),
    )
}

fn simulation_rows(scenario: u8, sizes: &[usize]) -> Vec<polyclust::metrics::MetricsRow> {
    let weights = default_weights();
    (0..REPS)
        .map(|rep| {
            let spec = ScenarioSpec::new(scenario, rep as u64).with_sizes(sizes);
            let c = gen_scenario(&spec).unwrap();
            let (mut row, _) = evaluate_collection(
                &c.series(),
                &c.labels(),
                sizes.len(),
                Algorithm::Kmeans,
                0,
                25,
                &weights,
            )
            .unwrap();
            row.rep = rep + 1;
            row.scenario = scenario;
            row
        })
        .collect()
}

fn ac4() -> Outcome {
    let start = Instant::now();
    let s = MetricsSummary::from_rows(&simulation_rows(1, &[25, 25])).unwrap();
    let secs = start.elapsed().as_secs_f64();
    outcome(
        "AC4 simulation I (25,25)",
        s.balanced_accuracy >= 0.85 && s.auc >= 0.85 && secs < 120.0,
        format!(
            "mean balanced accuracy {:.3} (>= 0.85), mean AUC {:.3} (>= 0.85), {secs:.1}s",
            s.balanced_accuracy, s.auc
        ),
    )
}

fn ac5() -> Outcome {
    let start = Instant::now();
    let a = MetricsSummary::from_rows(&simulation_rows(2, &[25, 25])).unwrap();
    let b = MetricsSummary::from_rows(&simulation_rows(2, &[10, 40])).unwrap();
    let secs = start.elapsed().as_secs_f64();
    outcome(
        "AC5 simulation II all measures 1",
        a.perfect_reps >= 18 && b.perfect_reps >= 18 && secs < 120.0,
        format!(
            "perfect replications (25,25) {}/20, (10,40) {}/20 (need >= 18 each); mean balanced accuracy {:.3} / {:.3}; {secs:.1}s",
            a.perfect_reps, b.perfect_reps, a.balanced_accuracy, b.balanced_accuracy
        ),
    )
}

fn ac6() -> Outcome {
    let start = Instant::now();
    let s = MetricsSummary::from_rows(&simulation_rows(3, &[20, 15, 15])).unwrap();
    let secs = start.elapsed().as_secs_f64();
    outcome(
        "AC6 simulation III (20,15,15)",
        s.weighted_f1 >= 0.85 && s.auc >= 0.85 && secs < 180.0,
        format!(
            "mean weighted F1 {:.3} (>= 0.85), mean one-vs-rest AUC {:.3} (>= 0.85), {secs:.1}s",
            s.weighted_f1, s.auc
        ),
    )
}

fn blobs(centers: &[[f64; 2]], per: usize, sd: f64, seed: u64) -> (Vec<Vec<f64>>, Vec<usize>) {
    let mut r = rng(seed);
    let mut pts = Vec::new();
    let mut labels = Vec::new();
    for (c, m) in centers.iter().enumerate() {
        for _ in 0..per {
            pts.push(
                m.iter()
                    .map(|x| {
                        let z: f64 = StandardNormal.sample(&mut r);
                        x + sd * z
                    })
                    .collect::<Vec<f64>>(),
            );
            labels.push(c);
        }
    }
    (pts, labels)
}

fn nifty_dir() -> Option<std::path::PathBuf> {
    std::env::var_os("POLYCLUST_NIFTY_DIR")
        .map(Into::into)
        .filter(|p: &std::path::PathBuf| p.is_dir())
}

fn ac7() -> Vec<Outcome> {
    let mut total = 0.0;
    for seed in 0..20u64 {
        let mut r = rng(seed);
        let pts: Vec<Vec<f64>> = (0..200)
            .map(|_| (0..12).map(|_| r.random::<f64>()).collect())
            .collect();
        total += hopkins(&FeatureMatrix::from_points(pts).unwrap(), None, 100, seed)
            .unwrap()
            .statistic;
    }
    let null_mean = total / 20.0;
    let (pts, _) = blobs(&[[0.0, 0.0], [20.0, 20.0]], 50, 0.5, 7);
    let blob = hopkins(&FeatureMatrix::from_points(pts).unwrap(), None, 100, 7)
        .unwrap()
        .statistic;
    let mut out = vec![outcome(
        "AC7 Hopkins calibration",
        (0.45..=0.58).contains(&null_mean) && blob > 0.8,
        format!("uniform 200x12 mean over 20 seeds {null_mean:.3} (in [0.45, 0.58]), two blobs {blob:.3} (> 0.8)"),
    )];
    match nifty_dir() {
        Some(dir) => {
            let series: Vec<TimeSeries> = ingest(&dir, 1000).unwrap().into_values().collect();
            let m = polyclust::clustering::standardize(
                &polyclust::clustering::build_default_feature_matrix(&series).unwrap(),
            )
            .unwrap();
            let h = hopkins(&m, None, 100, 0).unwrap();
            out.push(Outcome {
                id: "AC7 Hopkins on stock data (soft)",
                gating: false,
                pass: (0.70..=0.90).contains(&h.statistic),
                detail: format!(
                    "{} series, H = {:.3} (in [0.70, 0.90]), p = {:.2e}",
                    m.n_rows(),
                    h.statistic,
                    h.p_value
                ),
            });
        }
        None => out.push(Outcome {
            id: "AC7 Hopkins on stock data (soft)",
            gating: false,
            pass: true,
            detail: "skipped: POLYCLUST_NIFTY_DIR not set".into(),
        }),
    }
    out
}

fn ac8() -> Outcome {
    let start = Instant::now();
    let three = (0..20u64)
        .filter(|&s| {
            let (pts, _) = blobs(&[[0.0, 0.0], [8.0, 0.0], [4.0, 7.0]], 20, 0.7, 100 + s);
            let m = FeatureMatrix::from_points(pts).unwrap();
            gap_statistic(&m, 2..=10, 100, s, 10).unwrap().recommended_k == 3
        })
        .count();
    let one = (0..20u64)
        .filter(|&s| {
            let (pts, _) = blobs(&[[0.0, 0.0]], 60, 1.0, 200 + s);
            let m = FeatureMatrix::from_points(pts).unwrap();
            gap_statistic(&m, 1..=10, 100, s, 10).unwrap().recommended_k == 1
        })
        .count();
    outcome(
        "AC8 gap statistic rule",
        three >= 18 && one >= 16,
        format!(
            "three blobs (n=60, k in 2..=10) -> 3 in {three}/20 (>= 18); single blob (k in 1..=10) -> 1 in {one}/20 (>= 16); B = 100, {:.1}s",
            start.elapsed().as_secs_f64()
        ),
    )
}

fn exhaustive_medoid_cost(d: &Dissimilarity, k: usize) -> f64 {
    let n = d.len();
    let mut best = f64::INFINITY;
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != k {
            continue;
        }
        let medoids: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let c: f64 = (0..n)
            .map(|i| {
                medoids
                    .iter()
                    .map(|&m| d.get(i, m))
                    .fold(f64::INFINITY, f64::min)
            })
            .sum();
        best = best.min(c);
    }
    best
}

fn oracle_silhouette(d: &Dissimilarity, a: &[usize]) -> f64 {
    let n = a.len();
    let k = a.iter().max().unwrap() + 1;
    let mut total = 0.0;
    for i in 0..n {
        let own: Vec<usize> = (0..n).filter(|&j| j != i && a[j] == a[i]).collect();
        if own.is_empty() {
            continue;
        }
        let ai = own.iter().map(|&j| d.get(i, j)).sum::<f64>() / own.len() as f64;
        let bi = (0..k)
            .filter(|&c| c != a[i])
            .map(|c| {
                let m: Vec<usize> = (0..n).filter(|&j| a[j] == c).collect();
                m.iter().map(|&j| d.get(i, j)).sum::<f64>() / m.len() as f64
            })
            .fold(f64::INFINITY, f64::min);
        let den = ai.max(bi);
        if den > 0.0 {
            total += (bi - ai) / den;
        }
    }
    total / n as f64
}

fn oracle_dunn(d: &Dissimilarity, a: &[usize]) -> f64 {
    let n = a.len();
    let mut sep = f64::INFINITY;
    let mut diam: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            if a[i] == a[j] {
                diam = diam.max(d.get(i, j));
            } else {
                sep = sep.min(d.get(i, j));
            }
        }
    }
    sep / diam
}

fn centroid(pts: &[&Vec<f64>]) -> Vec<f64> {
    let dim = pts[0].len();
    (0..dim)
        .map(|j| pts.iter().map(|p| p[j]).sum::<f64>() / pts.len() as f64)
        .collect()
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

fn oracle_db(rows: &[Vec<f64>], a: &[usize]) -> f64 {
    let k = a.iter().max().unwrap() + 1;
    let members: Vec<Vec<&Vec<f64>>> = (0..k)
        .map(|c| {
            rows.iter()
                .zip(a)
                .filter(|(_, &l)| l == c)
                .map(|(r, _)| r)
                .collect()
        })
        .collect();
    let cents: Vec<Vec<f64>> = members.iter().map(|m| centroid(m)).collect();
    let scat: Vec<f64> = members
        .iter()
        .zip(&cents)
        .map(|(m, c)| m.iter().map(|p| dist(p, c)).sum::<f64>() / m.len() as f64)
        .collect();
    (0..k)
        .map(|i| {
            (0..k)
                .filter(|&j| j != i)
                .map(|j| (scat[i] + scat[j]) / dist(&cents[i], &cents[j]))
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .sum::<f64>()
        / k as f64
}

/// Within and total scatter from pairwise squared distances only.
fn oracle_ch(rows: &[Vec<f64>], a: &[usize]) -> f64 {
    let n = rows.len();
    let k = a.iter().max().unwrap() + 1;
    let sq = |i: usize, j: usize| dist(&rows[i], &rows[j]).powi(2);
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            total += sq(i, j);
        }
    }
    total /= 2.0 * n as f64;
    let mut within = 0.0;
    for c in 0..k {
        let m: Vec<usize> = (0..n).filter(|&i| a[i] == c).collect();
        let mut s = 0.0;
        for &i in &m {
            for &j in &m {
                s += sq(i, j);
            }
        }
        within += s / (2.0 * m.len() as f64);
    }
    ((total - within) / (k - 1) as f64) / (within / (n - k) as f64)
}

fn random_partition(n: usize, k: usize, r: &mut ChaCha8Rng) -> Vec<usize> {
    let mut a: Vec<usize> = (0..n)
        .map(|i| if i < k { i } else { r.random_range(0..k) })
        .collect();
    for i in (1..n).rev() {
        let j = r.random_range(0..=i);
        a.swap(i, j);
    }
    a
}

fn ac9() -> Vec<Outcome> {
    let mut r = rng(99);
    let mut exact = 0;
    let mut worst_gap: f64 = 0.0;
    for _ in 0..200 {
        let n = r.random_range(3..=8);
        let k = r.random_range(1..=3usize.min(n));
        let pts: Vec<Vec<f64>> = (0..n)
            .map(|_| vec![r.random::<f64>(), r.random::<f64>()])
            .collect();
        let d = Dissimilarity::euclidean(&pts);
        let got = pam(&d, k, 0).unwrap().objective;
        let best = exhaustive_medoid_cost(&d, k);
        if (got - best).abs() <= 1e-12 * best.max(1.0) {
            exact += 1;
        } else {
            worst_gap = worst_gap.max((got - best) / best);
        }
    }
    let pam_out = outcome(
        "AC9a PAM equals exhaustive medoid search",
        exact == 200,
        format!("{exact}/200 exact (need 200); worst relative excess {worst_gap:.3}"),
    );

    let recovered = (0..20u64)
        .filter(|&s| {
            let (pts, truth) = blobs(&[[0.0, 0.0], [10.0, 10.0]], 25, 1.0, 300 + s);
            let res = kmeans_points(&pts, 2, &KMeansConfig::new(s, 25)).unwrap();
            align_clusters(&truth, &res.assignments).unwrap().accuracy() == 1.0
        })
        .count();
    let km_out = outcome(
        "AC9b k-means recovers two blobs",
        recovered == 20,
        format!("{recovered}/20 seeds (need 20)"),
    );

    let mut worst: BTreeMap<&str, f64> = BTreeMap::new();
    for _ in 0..50 {
        let n = r.random_range(6..=30);
        let k = r.random_range(2..=4usize);
        let pts: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..3).map(|_| r.random::<f64>()).collect())
            .collect();
        let a = random_partition(n, k, &mut r);
        let d = Dissimilarity::euclidean(&pts);
        let pairs = [
            (
                "silhouette",
                silhouette(&d, &a).unwrap().average,
                oracle_silhouette(&d, &a),
            ),
            ("dunn", dunn(&d, &a).unwrap(), oracle_dunn(&d, &a)),
            (
                "davies_bouldin",
                davies_bouldin(&pts, &a).unwrap(),
                oracle_db(&pts, &a),
            ),
            (
                "calinski_harabasz",
                calinski_harabasz(&pts, &a).unwrap(),
                oracle_ch(&pts, &a),
            ),
        ];
        for (name, got, want) in pairs {
            let e = (got - want).abs() / want.abs().max(1.0);
            let w = worst.entry(name).or_insert(0.0);
            *w = w.max(e);
        }
    }
    let max_err = worst.values().fold(0.0f64, |a, &b| a.max(b));
    let idx_out = outcome(
        "AC9c internal indices equal definitional recomputation",
        max_err <= 1e-9,
        format!("50 instances n <= 30; max err {worst:?} (tol 1e-9)"),
    );
    vec![pam_out, km_out, idx_out]
}

fn pair_auc(pos: &[bool], s: &[f64]) -> f64 {
    let mut u = 0.0;
    let mut pairs = 0.0;
    for i in 0..s.len() {
        for j in 0..s.len() {
            if pos[i] && !pos[j] {
                pairs += 1.0;
                if s[i] > s[j] {
                    u += 1.0;
                } else if s[i] == s[j] {
                    u += 0.5;
                }
            }
        }
    }
    u / pairs
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn ac10() -> Outcome {
    let mut r = rng(10);
    let mut auc_ok = 0;
    for _ in 0..200 {
        let n = r.random_range(2..=200);
        let mut pos: Vec<bool> = (0..n).map(|_| r.random()).collect();
        pos[0] = true;
        pos[n - 1] = false;
        let s: Vec<f64> = (0..n).map(|_| r.random_range(0..8) as f64 * 0.25).collect();
        auc_ok += (auc(&pos, &s).unwrap() == pair_auc(&pos, &s)) as usize;
    }
    let mut align_ok = 0;
    for _ in 0..200 {
        let kt = r.random_range(2..=5);
        let kp = r.random_range(2..=5);
        let n = r.random_range(5..=60);
        let truth: Vec<usize> = (0..n).map(|_| r.random_range(0..kt)).collect();
        let assign: Vec<usize> = (0..n).map(|_| r.random_range(0..kp)).collect();
        let size = truth.iter().chain(&assign).max().unwrap() + 1;
        let best = permutations(size)
            .iter()
            .map(|p| {
                truth
                    .iter()
                    .zip(&assign)
                    .filter(|(&t, &a)| p[a] == t)
                    .count()
            })
            .max()
            .unwrap();
        let conf = align_clusters(&truth, &assign).unwrap();
        let diag: usize = (0..conf.k_true()).map(|c| conf.matrix[c][c]).sum();
        align_ok += (diag == best) as usize;
    }
    outcome(
        "AC10 AUC and alignment oracles",
        auc_ok == 200 && align_ok == 200,
        format!("AUC exact on {auc_ok}/200 tied-score sets (n <= 200); alignment optimal on {align_ok}/200 (K <= 5)"),
    )
}

fn ac11() -> Outcome {
    let id = "AC11 stock data: WIPRO and TCS share a cluster (soft)";
    let Some(dir) = nifty_dir() else {
        return Outcome {
            id,
            gating: false,
            pass: true,
            detail: "skipped: POLYCLUST_NIFTY_DIR not set".into(),
        };
    };
    let out = tempfile::tempdir().unwrap();
    let cfg = RunConfig {
        input_dir: Some(dir),
        ..RunConfig::default()
    };
    execute(&Task::Run(cfg), out.path()).unwrap();
    let report: serde_json::Value = serde_json::from_str(
        &fs::read_to_string(out.path().join("clusters_kmeans_k5.json")).unwrap(),
    )
    .unwrap();
    let cluster_of = |sym: &str| {
        report["assignments"]
            .as_array()
            .unwrap()
            .iter()
            .find(|a| a["label"] == sym)
            .map(|a| a["cluster"].as_u64().unwrap())
    };
    let n = report["assignments"].as_array().unwrap().len();
    let (w, t) = (cluster_of("WIPRO"), cluster_of("TCS"));
    Outcome {
        id,
        gating: false,
        pass: w.is_some() && w == t,
        detail: format!("{n} assignments; WIPRO cluster {w:?}, TCS cluster {t:?}"),
    }
}

fn dir_bytes(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                fs::read(e.path()).unwrap(),
            )
        })
        .collect()
}

fn run_in_pool(threads: usize, task: &Task, out: &Path) {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap();
    pool.install(|| execute(task, out)).unwrap();
}

fn ac12() -> Outcome {
    let work = tempfile::tempdir().unwrap();
    let sim_dir = work.path().join("sim");
    let sim = Task::Simulate(SimulateConfig {
        spec: ScenarioSpec::new(1, 77),
        reps: 4,
    });
    let run = Task::Run(RunConfig {
        simulate: Some(ScenarioSpec::new(3, 5)),
        k: 3,
        gap_b: 20,
        hopkins_reps: 20,
        k_range: (2, 6),
        ..RunConfig::default()
    });
    let eval = Task::Evaluate(EvaluateConfig {
        scenario_dir: sim_dir.clone(),
        algorithm: Algorithm::Kmeans,
        seed: 3,
        n_init: 25,
        weights: default_weights(),
    });
    run_in_pool(1, &sim, &sim_dir);
    let many = std::thread::available_parallelism()
        .map_or(4, |n| n.get())
        .max(4);
    let mut mismatches = Vec::new();
    let mut files = 0;
    for (name, task) in [("simulate", &sim), ("run", &run), ("evaluate", &eval)] {
        let a = work.path().join(format!("{name}_1"));
        let b = work.path().join(format!("{name}_n"));
        let c = work.path().join(format!("{name}_rerun"));
        run_in_pool(1, task, &a);
        run_in_pool(many, task, &b);
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(many)
            .build()
            .unwrap();
        pool.install(|| rerun(&a.join(MANIFEST), &c)).unwrap();
        let (da, db, dc) = (dir_bytes(&a), dir_bytes(&b), dir_bytes(&c));
        files += da.len();
        if da != db {
            mismatches.push(format!("{name}: 1 vs {many} threads"));
        }
        if da != dc {
            mismatches.push(format!("{name}: rerun from manifest"));
        }
    }
    outcome(
        "AC12 byte-identical outputs across thread counts and reruns",
        mismatches.is_empty(),
        if mismatches.is_empty() {
            format!("{files} files from simulate/run/evaluate identical with 1 and {many} threads and on rerun")
        } else {
            format!("differences: {}", mismatches.join("; "))
        },
    )
}

fn main() -> ExitCode {
    let started = Instant::now();
    let mut outcomes = vec![ac1(), ac2(), ac3(), ac4(), ac5(), ac6()];
    outcomes.extend(ac7());
    outcomes.push(ac8());
    outcomes.extend(ac9());
    outcomes.push(ac10());
    outcomes.push(ac11());
    outcomes.push(ac12());

    println!();
    for o in &outcomes {
        let tag = match (o.pass, o.gating) {
            _ if o.detail.starts_with("skipped") => "SKIP",
            (true, _) => "PASS",
            (false, true) => "FAIL",
            (false, false) => "FAIL (soft, non-gating)",
        };
        println!("[{tag}] {}: {}", o.id, o.detail);
    }
    let failed: Vec<&str> = outcomes
        .iter()
        .filter(|o| o.gating && !o.pass)
        .map(|o| o.id)
        .collect();
    println!(
        "\nacceptance: {} passed, {} failed (gating), {} skipped in {:.1}s",
        outcomes
            .iter()
            .filter(|o| o.pass && !o.detail.starts_with("skipped"))
            .count(),
        failed.len(),
        outcomes
            .iter()
            .filter(|o| o.detail.starts_with("skipped"))
            .count(),
        started.elapsed().as_secs_f64()
    );
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
