//! Corridor calibration against the static ratings, and how far the dynamic
//! ratings of the demo month rise above them.
//!
//! ```text
//! cargo run --release --example nlr_calibration
//! ```

use dlrsim::grid::{rating_series, RatingMode};
use dlrsim::scenario::{calibrate, load_inputs, prepare, ScenarioConfig};
use std::path::PathBuf;

fn main() {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/demo/scenario.toml");
    let config = ScenarioConfig::load(&path).expect("demo scenario");
    let inputs = load_inputs(&config).expect("demo data");

    println!("{:<6} {:>4} {:>4} {:>9} {:>9} {:>8}", "line", "220", "380", "NLR MVA", "raw MVA", "factor");
    for r in calibrate(&inputs.benchmark).expect("calibration") {
        println!(
            "{:<6} {:>4} {:>4} {:>9.0} {:>9.1} {:>8.4}",
            r.line, r.circuits_220, r.circuits_380, r.nlr_mva, r.raw_mva, r.factor
        );
    }

    let p = prepare(&config, &inputs).expect("prepared scenario");
    let b = &p.benchmark;
    let dlr = rating_series(&p.model, &b.conductor, &p.calibration, &p.ambients, RatingMode::Dlr).unwrap();
    println!("\nDLR over {} steps, as a share of NLR:", dlr.steps());
    println!("{:<6} {:>8} {:>8} {:>8} {:>10}", "line", "min", "mean", "max", "below NLR");
    for (l, line) in p.model.lines().iter().enumerate() {
        let ratio: Vec<f64> = dlr.limits[l].iter().map(|v| v / line.nlr_mva).collect();
        let mean = ratio.iter().sum::<f64>() / ratio.len() as f64;
        let min = ratio.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = ratio.iter().cloned().fold(0.0, f64::max);
        let below = ratio.iter().filter(|&&r| r < 1.0).count();
        println!("{:<6} {:>8.2} {:>8.2} {:>8.2} {:>10}", p.model.line_label(l), min, mean, max, below);
    }
}
