// Spectral and bispectral means of a simulated ARMA series, checked against
// the direct (slow) evaluation of the estimator.

use std::error::Error;

use polyclust::polyspectra::{brute_force_polyspectral_mean, default_weights, polyspectral_mean};
use polyclust::series::{dft, dominant_period, TimeSeries};
use polyclust::simgen::{gen_arma, series_rng, ArmaSpec};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let mut rng = series_rng(7, 0, 0);
    let series = gen_arma(&ArmaSpec::default(), 32, &mut rng)?;
    let table = dft(&series)?;
    println!("T = {}, |d(λ_1)|² = {:.4}", table.len(), table.power(1));
    println!("dominant period: {:.2}", dominant_period(&series)?);

    for named in default_weights() {
        let fast = polyspectral_mean(&series, &named.weight)?;
        let slow = brute_force_polyspectral_mean(&series, &named.weight)?;
        let rel = (fast.value - slow.value).abs() / slow.value.abs().max(1e-300);
        println!(
            "{:<22} order {} value {:>12.6} (oracle rel. diff {rel:.1e})",
            named.name, fast.order, fast.value
        );
        if rel > 1e-9 {
            return Err(format!("{} disagrees with the direct evaluation", named.name).into());
        }
    }

    let shifted = TimeSeries::new("shifted", series.values().iter().map(|v| v + 3.0).collect())?;
    let w = &default_weights()[4].weight;
    let a = polyspectral_mean(&series, w)?.value;
    let b = polyspectral_mean(&shifted, w)?.value;
    println!("bispectral mean unchanged by a level shift: {a:.6} vs {b:.6}");
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
