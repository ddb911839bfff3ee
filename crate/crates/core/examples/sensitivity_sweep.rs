//! How strongly each ambient parameter moves the rating: first-order fits of
//! rating sweeps, in absolute and normalised form.
//!
//! ```text
//! cargo run --example sensitivity_sweep -- [out_dir]
//! ```

use dlrsim::scenario::sweep;
use dlrsim::thermal::sensitivity::reference_ambient;
use dlrsim::thermal::{ConductorSpec, SweepParameter};
use std::path::PathBuf;

fn main() {
    let out = std::env::args().nth(1).map(PathBuf::from);
    let base = reference_ambient();
    let res = sweep(&ConductorSpec::zebra(), &base, &SweepParameter::ALL, 101, out.as_deref())
        .expect("sweeps over the supported domains");

    println!("base ambient: {base:?}\n");
    println!(
        "{:<11} {:>13} {:>12} {:>12} {:>11} {:>11}",
        "parameter", "range", "%/unit", "%/%", "start A", "end-to-end"
    );
    for f in &res.fits {
        println!(
            "{:<11} {:>6}..{:<5} {:>12.4} {:>12.4} {:>11.1} {:>10.1}%",
            f.parameter.name(),
            f.range.0,
            f.range.1,
            f.percent_per_unit,
            f.percent_per_percent,
            f.base_rating,
            f.end_to_end_percent
        );
    }
    if let Some(dir) = out {
        println!("\nsweep tables written to {}", dir.display());
    }
}
