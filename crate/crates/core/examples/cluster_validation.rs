// Elbow, silhouette, gap statistic, Dunn, Davies-Bouldin and
// Calinski-Harabasz over a range of k.

use std::error::Error;

use polyclust::clustering::{build_default_feature_matrix, standardize};
use polyclust::simgen::{gen_scenario, ScenarioSpec};
use polyclust::validation::{validate, ValidationConfig};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let collection = gen_scenario(&ScenarioSpec::new(2, 9))?;
    let m = standardize(&build_default_feature_matrix(&collection.series())?)?;
    let cfg = ValidationConfig {
        k_min: 2,
        k_max: 6,
        b: 20,
        hopkins_reps: 20,
        seed: 1,
        ..ValidationConfig::default()
    };
    let report = validate(&m, &cfg)?;
    let mut csv = Vec::new();
    report.write_csv(&mut csv)?;
    print!("{}", String::from_utf8(csv)?);
    println!("recommended k: {:?}", report.recommended_k);
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
