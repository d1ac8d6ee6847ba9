// k-means with k-means++ seeding and 25 restarts on simulated features.

use std::error::Error;

use polyclust::clustering::{build_default_feature_matrix, kmeans, standardize};
use polyclust::simgen::{gen_scenario, ScenarioSpec};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let collection = gen_scenario(&ScenarioSpec::new(1, 11))?;
    let m = standardize(&build_default_feature_matrix(&collection.series())?)?;
    for k in 2..=5 {
        let r = kmeans(&m, k, 0, 25)?;
        println!(
            "k = {k}: WSS {:>8.3}, sizes {:?}, {} Lloyd steps",
            r.objective,
            r.cluster_sizes(),
            r.iterations
        );
    }
    let r = kmeans(&m, 2, 0, 25)?;
    let report = r.report(m.labels());
    println!("{}", serde_json::to_string(&report.assignments[..3])?);
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
