// Simulation study: cluster each replication and score it against the
// true groups (alignment, sensitivity, specificity, F1, AUC).

use std::error::Error;

use polyclust::clustering::Algorithm;
use polyclust::metrics::{align_clusters, auc, binary_measures};
use polyclust::pipeline::{evaluate_collection, MetricsSummary};
use polyclust::polyspectra::default_weights;
use polyclust::simgen::{gen_scenario, ScenarioSpec};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let conf = align_clusters(&[0, 0, 0, 1, 1, 1], &[1, 1, 0, 0, 0, 0])?;
    println!(
        "toy confusion {:?}, mapping {:?}",
        conf.matrix, conf.mapping
    );
    println!("toy measures {:?}", binary_measures(&conf)?);
    println!(
        "toy AUC {:.3}",
        auc(&[true, true, false, false], &[0.9, 0.4, 0.4, 0.1])?
    );

    let weights = default_weights();
    let mut rows = Vec::new();
    for rep in 0..5 {
        let c = gen_scenario(&ScenarioSpec::new(1, 100 + rep as u64))?;
        let (mut row, _) = evaluate_collection(
            &c.series(),
            &c.labels(),
            2,
            Algorithm::Kmeans,
            0,
            25,
            &weights,
        )?;
        row.rep = rep + 1;
        row.scenario = 1;
        println!(
            "rep {}: sensitivity {:.2} specificity {:.2} F1 {:.2} balanced {:.2} AUC {:.3}",
            row.rep, row.sensitivity, row.specificity, row.f1, row.balanced_accuracy, row.auc
        );
        rows.push(row);
    }
    let s = MetricsSummary::from_rows(&rows).expect("rows");
    println!(
        "mean balanced accuracy {:.3}, mean AUC {:.3}",
        s.balanced_accuracy, s.auc
    );
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
