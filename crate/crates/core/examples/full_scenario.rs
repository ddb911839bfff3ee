//! Run the shipped demo scenario (or any scenario file) under NLR and DLR and
//! print the curtailment comparison.
//!
//! ```text
//! cargo run --release --example full_scenario -- [scenario.toml]
//! ```

use dlrsim::scenario::{run, ScenarioConfig};
use std::path::PathBuf;
use std::time::Instant;

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/demo/scenario.toml"));
    let config = ScenarioConfig::load(&path).unwrap_or_else(|e| {
        eprintln!("{e}");
        std::process::exit(e.exit_code());
    });
    let started = Instant::now();
    let runs = run(&config).unwrap_or_else(|e| {
        eprintln!("{e}");
        std::process::exit(e.exit_code());
    });
    println!("{:<6} {:>5} {:>9} {:>9} {:>9}", "mode", "zone", "load %", "wind %", "pv %");
    for r in &runs {
        for z in r.report.zones.iter().chain(std::iter::once(&r.report.total)) {
            println!(
                "{:<6} {:>5} {:>9.3} {:>9.3} {:>9.3}",
                r.mode.as_str(),
                z.zone,
                z.load_pct,
                z.wind_pct,
                z.pv_pct
            );
        }
    }
    println!("finished in {:.1} s, outputs in {}", started.elapsed().as_secs_f64(), config.out.display());
}
