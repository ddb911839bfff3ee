//! Receding-horizon dispatch of a two-zone system: a windy exporter with
//! pumped storage and a load centre behind a thin line, under a static and a
//! doubled line limit.
//!
//! ```text
//! cargo run --example dispatch_window
//! ```

use dlrsim::dispatch::{
    curtailment_report, receding_horizon_run, DispatchProblem, DispatchSettings, PowerNodeFleet, StorageUnit,
    ZoneFleet,
};
use dlrsim::grid::{build_ptdf, GridModel, Line, Node};

fn main() {
    let steps = 48;
    let wind: Vec<f64> = (0..steps)
        .map(|k| 900.0 * (0.5 + 0.5 * (k as f64 / 8.0).sin()).max(0.0))
        .collect();
    let fleet = PowerNodeFleet::new(vec![
        ZoneFleet {
            id: "N".into(),
            dispatchable_mw: 200.0,
            storage: Some(StorageUnit::symmetric(800.0, 150.0, 0.75, 0.5)),
            wind,
            pv: vec![0.0; steps],
            load: vec![250.0; steps],
        },
        ZoneFleet {
            id: "S".into(),
            dispatchable_mw: 500.0,
            storage: None,
            wind: vec![0.0; steps],
            pv: vec![0.0; steps],
            load: (0..steps).map(|k| 700.0 + 150.0 * (k as f64 / 6.0).cos()).collect(),
        },
    ])
    .expect("consistent fleet");
    let model = GridModel::new(
        vec![
            Node { id: "N".into(), name: "north".into() },
            Node { id: "S".into(), name: "south".into() },
        ],
        vec![Line {
            from: 0,
            to: 1,
            circuits_220: 0,
            circuits_380: 1,
            susceptance: 10.0,
            nlr_mva: 300.0,
        }],
        100.0,
    )
    .unwrap();
    let ptdf = build_ptdf(&model, 0).unwrap();
    let settings = DispatchSettings::with_horizon(16);

    for (label, limit) in [("static 300 MW", 300.0), ("dynamic 600 MW", 600.0)] {
        let limits = vec![vec![limit; steps]];
        let problem = DispatchProblem {
            fleet: &fleet,
            ptdf: &ptdf,
            line_limits: &limits,
            settings: &settings,
        };
        let result = receding_horizon_run(&problem, steps - 16).expect("dispatch");
        let report = curtailment_report(&result, &fleet, settings.step_hours);
        let t = &report.total;
        println!(
            "{label:<15} cost {:>12.0}  wind curtailed {:>6.2}%  load shed {:>6.2}%  final SoC {:.2}",
            result.total_cost, t.wind_pct, t.load_pct, result.final_state.soc[0]
        );
    }
}
