// Twelve features per series, then column-wise z-scoring.

use std::error::Error;

use polyclust::clustering::{build_default_feature_matrix, standardize};
use polyclust::pipeline::write_features_csv;
use polyclust::simgen::{gen_scenario, ScenarioSpec};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let collection = gen_scenario(&ScenarioSpec::new(2, 3).with_sizes(&[4, 4]))?;
    let raw = build_default_feature_matrix(&collection.series())?;
    println!(
        "{} rows x {} features: {}",
        raw.n_rows(),
        raw.n_cols(),
        raw.names().join(", ")
    );
    let z = standardize(&raw)?;
    let sd = z.standardization().expect("standardized");
    println!(
        "column sds before scaling: {:?}",
        sd.sds.iter().map(|v| format!("{v:.3}")).collect::<Vec<_>>()
    );
    let mut out = Vec::new();
    write_features_csv(&z, &mut out)?;
    print!(
        "{}",
        String::from_utf8(out)?
            .lines()
            .take(3)
            .collect::<Vec<_>>()
            .join("\n")
    );
    println!();
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
