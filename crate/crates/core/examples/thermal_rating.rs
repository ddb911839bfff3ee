//! Ampacity of the Zebra conductor under a few weather situations, with the
//! heat-balance terms at the rating and the conductor temperature at partial
//! load.
//!
//! ```text
//! cargo run --example thermal_rating
//! ```

use dlrsim::thermal::{ampacity, heat_balance, solve_temperature, AmbientConditions, ConductorSpec};

fn main() {
    let zebra = ConductorSpec::zebra();
    let cases = [
        ("hot, calm, full sun", AmbientConditions::new(0.6, 45.0, 1000.0, 35.0)),
        ("summer afternoon", AmbientConditions::new(3.0, 45.0, 800.0, 25.0)),
        ("winter night, breeze", AmbientConditions::new(5.0, 45.0, 0.0, 0.0)),
        ("winter storm", AmbientConditions::new(15.0, 90.0, 0.0, 2.0)),
    ];

    println!(
        "{:<22} {:>8} {:>8} {:>8} {:>8} {:>8} {:>8}",
        "ambient", "I_dc A", "I_ac A", "P_J", "P_S", "P_c", "P_r"
    );
    for (label, amb) in cases {
        let amb = amb.expect("valid ambient");
        let a = ampacity(&zebra, &amb);
        let terms = heat_balance(&zebra, &amb, a.dc, zebra.t_max);
        println!(
            "{label:<22} {:>8.0} {:>8.0} {:>8.2} {:>8.2} {:>8.2} {:>8.2}",
            a.dc, a.ac, terms.p_joule, terms.p_solar, terms.p_conv, terms.p_rad
        );
    }

    let amb = AmbientConditions::new(3.0, 45.0, 800.0, 25.0).unwrap();
    let rating = ampacity(&zebra, &amb).dc;
    println!("\nconductor temperature, summer afternoon:");
    for share in [0.25, 0.5, 0.75, 1.0, 1.1] {
        let s = solve_temperature(&zebra, &amb, share * rating).expect("solver converges");
        println!(
            "  {:>4.0}% of rating -> {:6.2} °C after {} bisection steps",
            100.0 * share,
            s.temperature,
            s.iterations
        );
    }
}
