// Clustering tendency: the Hopkins statistic and a VAT ordering.

use std::error::Error;

use polyclust::clustering::{
    build_default_feature_matrix, standardize, Dissimilarity, FeatureMatrix,
};
use polyclust::simgen::{gen_scenario, ScenarioSpec};
use polyclust::validation::{hopkins, reorder, vat_order};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let collection = gen_scenario(&ScenarioSpec::new(2, 4))?;
    let m = standardize(&build_default_feature_matrix(&collection.series())?)?;
    let h = hopkins(&m, None, 100, 0)?;
    println!(
        "simulated features: H = {:.3} (p = {:.2e}, m = {})",
        h.statistic, h.p_value, h.m_samples
    );

    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let uniform: Vec<Vec<f64>> = (0..200)
        .map(|_| (0..12).map(|_| rng.random::<f64>()).collect())
        .collect();
    let u = hopkins(&FeatureMatrix::from_points(uniform)?, None, 100, 0)?;
    println!("uniform cloud:      H = {:.3}", u.statistic);

    let d = Dissimilarity::euclidean(m.rows());
    let order = vat_order(&d);
    let groups: String = order
        .iter()
        .map(|&i| collection.group_names[collection.members[i].group].clone())
        .collect();
    println!("VAT order by group: {groups}");
    let r = reorder(&d, &order);
    println!(
        "first off-diagonal entries after reordering: {:.3} {:.3}",
        r.get(0, 1),
        r.get(1, 2)
    );
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
