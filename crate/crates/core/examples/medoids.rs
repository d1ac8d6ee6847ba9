// PAM on the full dissimilarity matrix and its sampling variant CLARA.

use std::error::Error;

use polyclust::clustering::{
    build_default_feature_matrix, clara, clara_default, pam, standardize, Centers, Dissimilarity,
};
use polyclust::simgen::{gen_scenario, ScenarioSpec};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let collection = gen_scenario(&ScenarioSpec::new(3, 5))?;
    let m = standardize(&build_default_feature_matrix(&collection.series())?)?;
    let d = Dissimilarity::euclidean(m.rows());
    let p = pam(&d, 3, 0)?;
    if let Centers::Medoids(idx) = &p.centers {
        let names: Vec<&str> = idx.iter().map(|&i| m.labels()[i].as_str()).collect();
        println!(
            "PAM medoids {names:?}, total dissimilarity {:.3}, {} swaps",
            p.objective, p.iterations
        );
    }
    let c = clara_default(&m, 3, 0)?;
    println!(
        "CLARA (5 samples of {}) objective {:.3}",
        (40 + 6).min(m.n_rows()),
        c.objective
    );
    let small = clara(&m, 3, 10, 15, 0)?;
    println!(
        "CLARA (10 samples of 15) running best: {:?}",
        small
            .objective_trace
            .iter()
            .map(|v| format!("{v:.2}"))
            .collect::<Vec<_>>()
    );
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
