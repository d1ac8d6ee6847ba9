use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use polyclust::clustering::Algorithm;
use polyclust::pipeline::{
    execute, read_json, rerun, thread_pool_from_env, ClusterConfig, EvaluateConfig, FeaturesConfig,
    HopkinsConfig, RunConfig, SimulateConfig, Task, ValidateConfig,
};
use polyclust::polyspectra::{default_weights, NamedWeight};
use polyclust::simgen::{GarchForm, ScenarioSpec};
use polyclust::validation::ValidationConfig;

/// Polyspectral-mean clustering of time series.
///
/// Worker threads are capped by POLYCLUST_THREADS (0 or unset: automatic).
#[derive(Parser)]
#[command(name = "polyclust", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Out {
    /// Directory for artifacts and manifest.json.
    #[arg(long, short, default_value = "out")]
    output: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Generate replications of a simulation scenario.
    Simulate {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        scenario: u8,
        /// Group sizes, e.g. 25,25 or 20,15,15.
        #[arg(long, value_delimiter = ',')]
        sizes: Option<Vec<usize>>,
        #[arg(long, default_value_t = 20)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Series length.
        #[arg(long, default_value_t = 100)]
        len: usize,
        /// GARCH intercept.
        #[arg(long, default_value_t = 0.0)]
        omega: f64,
        /// Use the standard GARCH(1,1) variance recursion.
        #[arg(long)]
        standard_garch: bool,
        #[command(flatten)]
        out: Out,
    },
    /// Extract features from a directory of per-stock CSV files.
    Features {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 1000)]
        window: usize,
        /// JSON list of named weights replacing the defaults.
        #[arg(long)]
        weights: Option<PathBuf>,
        #[command(flatten)]
        out: Out,
    },
    /// Cluster a feature matrix.
    Cluster {
        #[arg(long)]
        features: PathBuf,
        #[arg(long, default_value_t = 5)]
        k: usize,
        #[arg(long, default_value = "kmeans")]
        algo: Algorithm,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 25)]
        n_init: usize,
        #[command(flatten)]
        out: Out,
    },
    /// Cluster-count diagnostics over a range of k.
    Validate {
        #[arg(long)]
        features: PathBuf,
        #[arg(long, default_value_t = 2)]
        kmin: usize,
        #[arg(long, default_value_t = 10)]
        kmax: usize,
        /// Number of gap reference sets.
        #[arg(long = "B", alias = "b", default_value_t = 100)]
        b: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 25)]
        n_init: usize,
        #[arg(long, default_value_t = 100)]
        hopkins_reps: usize,
        #[command(flatten)]
        out: Out,
    },
    /// Hopkins clustering-tendency statistic.
    Hopkins {
        #[arg(long)]
        features: PathBuf,
        /// Probes per repetition; default max(ceil(rows/10), 5).
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, default_value_t = 100)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: Out,
    },
    /// Features, clustering and accuracy measures for simulated replications.
    Evaluate {
        #[arg(long)]
        scenario_dir: PathBuf,
        #[arg(long, default_value = "kmeans")]
        algo: Algorithm,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 25)]
        n_init: usize,
        #[arg(long)]
        weights: Option<PathBuf>,
        #[command(flatten)]
        out: Out,
    },
    /// Full pipeline; flags override values from --config.
    Run {
        /// JSON run configuration.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        window: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        algo: Option<Algorithm>,
        #[arg(long)]
        kmin: Option<usize>,
        #[arg(long)]
        kmax: Option<usize>,
        #[arg(long = "B", alias = "b")]
        b: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        out: Out,
    },
    /// Re-execute the run recorded in a manifest.
    Rerun {
        #[arg(long)]
        manifest: PathBuf,
        /// Defaults to the manifest's directory.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

fn weights(path: Option<PathBuf>) -> polyclust::Result<Vec<NamedWeight>> {
    path.map_or_else(|| Ok(default_weights()), |p| read_json(&p))
}

fn dispatch(command: Command) -> polyclust::Result<Vec<PathBuf>> {
    let (task, out) = match command {
        Command::Simulate {
            scenario,
            sizes,
            reps,
            seed,
            len,
            omega,
            standard_garch,
            out,
        } => {
            let mut spec = ScenarioSpec::new(scenario, seed);
            if let Some(sizes) = sizes {
                spec = spec.with_sizes(&sizes);
            }
            spec.len = len;
            spec.garch.omega = omega;
            if standard_garch {
                spec.garch.form = GarchForm::Standard;
            }
            (Task::Simulate(SimulateConfig { spec, reps }), out)
        }
        Command::Features {
            input,
            window,
            weights: w,
            out,
        } => (
            Task::Features(FeaturesConfig {
                input_dir: input,
                window_days: window,
                weights: weights(w)?,
            }),
            out,
        ),
        Command::Cluster {
            features,
            k,
            algo,
            seed,
            n_init,
            out,
        } => (
            Task::Cluster(ClusterConfig {
                features,
                k,
                algorithm: algo,
                seed,
                n_init,
            }),
            out,
        ),
        Command::Validate {
            features,
            kmin,
            kmax,
            b,
            seed,
            n_init,
            hopkins_reps,
            out,
        } => (
            Task::Validate(ValidateConfig {
                features,
                validation: ValidationConfig {
                    k_min: kmin,
                    k_max: kmax,
                    b,
                    n_init,
                    hopkins_samples: None,
                    hopkins_reps,
                    seed,
                },
            }),
            out,
        ),
        Command::Hopkins {
            features,
            m,
            reps,
            seed,
            out,
        } => (
            Task::Hopkins(HopkinsConfig {
                features,
                m,
                reps,
                seed,
            }),
            out,
        ),
        Command::Evaluate {
            scenario_dir,
            algo,
            seed,
            n_init,
            weights: w,
            out,
        } => (
            Task::Evaluate(EvaluateConfig {
                scenario_dir,
                algorithm: algo,
                seed,
                n_init,
                weights: weights(w)?,
            }),
            out,
        ),
        Command::Run {
            config,
            input,
            window,
            k,
            algo,
            kmin,
            kmax,
            b,
            seed,
            out,
        } => {
            let mut c: RunConfig = match config {
                Some(p) => read_json(&p)?,
                None => RunConfig::default(),
            };
            if input.is_some() {
                c.input_dir = input;
                c.simulate = None;
            }
            c.window_days = window.unwrap_or(c.window_days);
            c.k = k.unwrap_or(c.k);
            c.algorithm = algo.unwrap_or(c.algorithm);
            c.k_range = (kmin.unwrap_or(c.k_range.0), kmax.unwrap_or(c.k_range.1));
            c.gap_b = b.unwrap_or(c.gap_b);
            c.seed = seed.unwrap_or(c.seed);
            (Task::Run(c), out)
        }
        Command::Rerun { manifest, output } => {
            let dir =
                output.unwrap_or_else(|| manifest.parent().map(PathBuf::from).unwrap_or_default());
            return rerun(&manifest, &dir);
        }
    };
    execute(&task, &out.output)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = thread_pool_from_env().and_then(|pool| pool.install(|| dispatch(cli.command)));
    match result {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::fmt::Write as _;
    use std::fs;
    use std::path::Path;

    fn run(args: &[&str]) -> polyclust::Result<Vec<PathBuf>> {
        let cli =
            Cli::try_parse_from(std::iter::once("polyclust").chain(args.iter().copied())).unwrap();
        dispatch(cli.command)
    }

    fn stock_dir(dir: &Path) {
        for (s, sym) in ["AAA", "BBB", "CCC", "DDD", "EEE", "FFF", "GGG", "HHH"]
            .iter()
            .enumerate()
        {
            let mut text = String::from("Date,Symbol,VWAP\n");
            let start = chrono::NaiveDate::from_ymd_opt(2019, 1, 1).unwrap();
            for t in 0..80u64 {
                let x = t as f64;
                let v = 100.0
                    + x * (s % 3) as f64 * 0.3
                    + (x * (0.2 + s as f64 * 0.15)).sin() * (1 + s % 2) as f64;
                writeln!(text, "{},{sym},{v}", start + chrono::Days::new(t)).unwrap();
            }
            fs::write(dir.join(format!("{sym}.csv")), text).unwrap();
        }
    }

    fn arg(p: &Path) -> &str {
        p.to_str().unwrap()
    }

    #[test]
    fn subcommands_chain() {
        let tmp = tempfile::tempdir().unwrap();
        let d = tmp.path();
        let (stocks, feats, sim, eval) =
            (d.join("stocks"), d.join("f"), d.join("sim"), d.join("eval"));
        fs::create_dir(&stocks).unwrap();
        stock_dir(&stocks);

        run(&[
            "features",
            "--input",
            arg(&stocks),
            "--window",
            "60",
            "-o",
            arg(&feats),
        ])
        .unwrap();
        let fcsv = feats.join("features.csv");
        assert!(fcsv.exists() && feats.join("manifest.json").exists());

        let out = run(&[
            "cluster",
            "--features",
            arg(&fcsv),
            "--k",
            "2",
            "--algo",
            "pam",
            "-o",
            arg(&d.join("c")),
        ])
        .unwrap();
        assert!(out.iter().any(|p| p.ends_with("clusters_pam_k2.json")));

        run(&[
            "validate",
            "--features",
            arg(&fcsv),
            "--kmin",
            "2",
            "--kmax",
            "4",
            "--B",
            "10",
            "--hopkins-reps",
            "5",
            "-o",
            arg(&d.join("v")),
        ])
        .unwrap();
        assert!(d.join("v/validation.json").exists());

        run(&[
            "hopkins",
            "--features",
            arg(&fcsv),
            "--reps",
            "5",
            "-o",
            arg(&d.join("h")),
        ])
        .unwrap();
        assert!(d.join("h/hopkins.json").exists());

        run(&[
            "simulate",
            "--scenario",
            "1",
            "--sizes",
            "6,6",
            "--reps",
            "2",
            "--seed",
            "3",
            "-o",
            arg(&sim),
        ])
        .unwrap();
        assert!(sim.join("rep_001.csv").exists() && sim.join("rep_002.csv").exists());

        run(&["evaluate", "--scenario-dir", arg(&sim), "-o", arg(&eval)]).unwrap();
        let before = fs::read(eval.join("metrics.csv")).unwrap();
        run(&[
            "rerun",
            "--manifest",
            arg(&eval.join("manifest.json")),
            "-o",
            arg(&d.join("again")),
        ])
        .unwrap();
        assert_eq!(fs::read(d.join("again/metrics.csv")).unwrap(), before);
    }

    #[test]
    fn bad_input_is_an_error() {
        let tmp = tempfile::tempdir().unwrap();
        let missing = tmp.path().join("nope.csv");
        assert!(run(&[
            "cluster",
            "--features",
            arg(&missing),
            "-o",
            arg(tmp.path())
        ])
        .is_err());
        assert!(Cli::try_parse_from(["polyclust", "simulate", "--scenario", "4"]).is_err());
        assert!(Cli::try_parse_from(["polyclust", "cluster", "--bogus"]).is_err());
    }
}
