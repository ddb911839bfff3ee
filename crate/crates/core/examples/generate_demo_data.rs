//! Regenerate the synthetic December month shipped under `data/demo/`.
//!
//! ```text
//! cargo run --example generate_demo_data -- [out_dir] [seed]
//! ```

use dlrsim::scenario::synthetic::{generate, DEMO_SEED};
use std::path::PathBuf;

fn main() {
    let mut args = std::env::args().skip(1);
    let dir = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/demo"));
    let seed = args.next().map_or(DEMO_SEED, |s| s.parse().expect("seed must be an integer"));

    let data = generate(seed);
    data.write(&dir).expect("write demo data");
    println!(
        "{} steps x {} zones, {} daily temperature records -> {}",
        data.wind.len(),
        data.wind.columns.len(),
        data.tmin.len(),
        dir.display()
    );
    for (z, id) in data.wind.columns.iter().enumerate() {
        let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
        println!(
            "  {id}: wind {:7.0} MW  pv {:6.0} MW  load {:7.0} MW",
            mean(&data.wind.values[z]),
            mean(&data.pv.values[z]),
            mean(&data.load.values[z])
        );
    }
}
