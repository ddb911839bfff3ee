use super::io::write_series;
use super::pipeline::{Prepared, RunArtifacts, ScenarioInputs};
use super::{ScenarioConfig, ScenarioError};
use crate::dispatch::{DispatchWeights, ZoneCurtailment};
use crate::thermal::air::{GRAVITY, KELVIN_OFFSET, STEFAN_BOLTZMANN};
use crate::thermal::SensitivityFit;
use chrono::{DateTime, Duration, DurationRound, Utc};
use serde::Serialize;
use std::collections::BTreeMap;
use std::path::Path;

fn io_err(path: &Path, e: impl std::fmt::Display) -> ScenarioError {
    ScenarioError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

/// Everything that determines a run's outputs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Manifest {
    pub crate_version: String,
    pub rating_mode: String,
    pub start: String,
    pub end: String,
    pub res_scale: f64,
    pub disp_scale: f64,
    pub horizon: usize,
    pub step_seconds: i64,
    pub weights: DispatchWeights,
    pub ramp_limit_mw: Option<Vec<f64>>,
    pub constants: BTreeMap<String, f64>,
    pub calibration: BTreeMap<String, f64>,
    pub input_sha256: BTreeMap<String, String>,
    pub benchmark: super::Benchmark,
}

impl Manifest {
    pub fn new(config: &ScenarioConfig, inputs: &ScenarioInputs, prepared: &Prepared, mode: &str) -> Self {
        let constants = BTreeMap::from([
            ("stefan_boltzmann".to_string(), STEFAN_BOLTZMANN),
            ("kelvin_offset".to_string(), KELVIN_OFFSET),
            ("gravity".to_string(), GRAVITY),
            ("temperature_tolerance_c".to_string(), crate::thermal::solver::TOLERANCE),
            ("step_hours".to_string(), prepared.settings.step_hours),
        ]);
        let calibration = prepared
            .calibration
            .factors
            .iter()
            .enumerate()
            .map(|(i, &f)| (prepared.model.line_label(i), f))
            .collect();
        Self {
            crate_version: env!("CARGO_PKG_VERSION").to_string(),
            rating_mode: mode.to_string(),
            start: super::io::format_timestamp(config.start),
            end: super::io::format_timestamp(config.end),
            res_scale: config.res_scale,
            disp_scale: config.disp_scale,
            horizon: config.horizon,
            step_seconds: 900,
            weights: prepared.settings.weights,
            ramp_limit_mw: config.ramp_limit_mw.clone(),
            constants,
            calibration,
            input_sha256: inputs.hashes.clone(),
            benchmark: inputs.benchmark.clone(),
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("manifest serialises")
    }
}

fn write_curtailment(path: &Path, rows: &[ZoneCurtailment], total: &ZoneCurtailment) -> Result<(), ScenarioError> {
    let mut w = csv::Writer::from_path(path).map_err(|e| io_err(path, e))?;
    for r in rows.iter().chain(std::iter::once(total)) {
        w.serialize(r).map_err(|e| io_err(path, e))?;
    }
    w.flush().map_err(|e| io_err(path, e))
}

/// Emit the outputs of one rating mode into `dir`.
pub fn write_run(
    dir: &Path,
    config: &ScenarioConfig,
    inputs: &ScenarioInputs,
    prepared: &Prepared,
    run: &RunArtifacts,
) -> Result<(), ScenarioError> {
    super::create_dir(dir)?;
    let model = &prepared.model;
    let ts = &run.timestamps;

    write_curtailment(&dir.join("curtailment.csv"), &run.report.zones, &run.report.total)?;

    for line in 0..model.lines().len() {
        let label = model.line_label(line);
        let limits = &run.ratings.limits[line];
        let rating_rows: Vec<[f64; 1]> = limits.iter().map(|&v| [v]).collect();
        write_series(
            &dir.join(format!("ratings_{label}.csv")),
            &["rating_mva".to_string()],
            ts.iter().zip(&rating_rows).map(|(t, r)| (*t, r.as_slice())),
        )?;
        let flow_rows: Vec<[f64; 2]> = run
            .result
            .steps
            .iter()
            .zip(limits)
            .map(|(s, &lim)| {
                let f = s.flows[line];
                let loading = if lim > 0.0 { 100.0 * f.abs() / lim } else { 0.0 };
                [f, loading]
            })
            .collect();
        write_series(
            &dir.join(format!("flows_{label}.csv")),
            &["flow_mw".to_string(), "loading_pct".to_string()],
            ts.iter().zip(&flow_rows).map(|(t, r)| (*t, r.as_slice())),
        )?;
    }

    write_hourly(&dir.join("hourly.csv"), prepared, run)?;

    let manifest = Manifest::new(config, inputs, prepared, run.mode.as_str());
    let path = dir.join("manifest.toml");
    std::fs::write(&path, manifest.to_toml()).map_err(|e| io_err(&path, e))
}

/// Hourly mean RES curtailment and load shedding per zone, MW.
fn write_hourly(path: &Path, prepared: &Prepared, run: &RunArtifacts) -> Result<(), ScenarioError> {
    let zones: Vec<&str> = prepared.fleet.zones.iter().map(|z| z.id.as_str()).collect();
    let mut columns = Vec::with_capacity(2 * zones.len());
    for z in &zones {
        columns.push(format!("{z}_curtailment_mw"));
        columns.push(format!("{z}_shed_mw"));
    }
    let mut hours: Vec<(DateTime<Utc>, Vec<f64>, usize)> = Vec::new();
    for (t, s) in run.timestamps.iter().zip(&run.result.steps) {
        let hour = t.duration_trunc(Duration::hours(1)).expect("timestamp truncation");
        if hours.last().map(|h| h.0) != Some(hour) {
            hours.push((hour, vec![0.0; columns.len()], 0));
        }
        let (_, acc, n) = hours.last_mut().unwrap();
        for z in 0..zones.len() {
            acc[2 * z] += s.wind_curtailed[z] + s.pv_curtailed[z];
            acc[2 * z + 1] += s.shed[z];
        }
        *n += 1;
    }
    let rows: Vec<(DateTime<Utc>, Vec<f64>)> = hours
        .into_iter()
        .map(|(t, acc, n)| (t, acc.into_iter().map(|v| v / n as f64).collect()))
        .collect();
    write_series(path, &columns, rows.iter().map(|(t, v)| (*t, v.as_slice())))
}

#[derive(Serialize)]
struct ComparisonRow<'a> {
    zone: &'a str,
    nlr_load_pct: f64,
    nlr_wind_pct: f64,
    nlr_pv_pct: f64,
    dlr_load_pct: f64,
    dlr_wind_pct: f64,
    dlr_pv_pct: f64,
}

/// Side-by-side curtailment table of an NLR and a DLR run.
pub fn write_comparison(path: &Path, nlr: &RunArtifacts, dlr: &RunArtifacts) -> Result<(), ScenarioError> {
    let mut w = csv::Writer::from_path(path).map_err(|e| io_err(path, e))?;
    let a = nlr.report.zones.iter().chain(std::iter::once(&nlr.report.total));
    let b = dlr.report.zones.iter().chain(std::iter::once(&dlr.report.total));
    for (x, y) in a.zip(b) {
        w.serialize(ComparisonRow {
            zone: &x.zone,
            nlr_load_pct: x.load_pct,
            nlr_wind_pct: x.wind_pct,
            nlr_pv_pct: x.pv_pct,
            dlr_load_pct: y.load_pct,
            dlr_wind_pct: y.wind_pct,
            dlr_pv_pct: y.pv_pct,
        })
        .map_err(|e| io_err(path, e))?;
    }
    w.flush().map_err(|e| io_err(path, e))
}

#[derive(Serialize)]
struct SweepRow {
    value: f64,
    dc_a: f64,
    ac_a: f64,
    headroom_exhausted: bool,
}

#[derive(Serialize)]
struct FitRow<'a> {
    parameter: &'a str,
    lo: f64,
    hi: f64,
    slope_a_per_unit: f64,
    base_rating_a: f64,
    percent_per_unit: f64,
    percent_per_percent: f64,
    end_to_end_percent: f64,
}

pub(crate) fn write_sweeps(dir: &Path, fits: &[SensitivityFit]) -> Result<(), ScenarioError> {
    for f in fits {
        let path = dir.join(format!("sweep_{}.csv", f.parameter));
        let mut w = csv::Writer::from_path(&path).map_err(|e| io_err(&path, e))?;
        for p in &f.points {
            w.serialize(SweepRow {
                value: p.value,
                dc_a: p.dc,
                ac_a: p.ac,
                headroom_exhausted: p.headroom_exhausted,
            })
            .map_err(|e| io_err(&path, e))?;
        }
        w.flush().map_err(|e| io_err(&path, e))?;
    }
    let path = dir.join("sensitivity.csv");
    let mut w = csv::Writer::from_path(&path).map_err(|e| io_err(&path, e))?;
    for f in fits {
        w.serialize(FitRow {
            parameter: f.parameter.name(),
            lo: f.range.0,
            hi: f.range.1,
            slope_a_per_unit: f.slope,
            base_rating_a: f.base_rating,
            percent_per_unit: f.percent_per_unit,
            percent_per_percent: f.percent_per_percent,
            end_to_end_percent: f.end_to_end_percent,
        })
        .map_err(|e| io_err(&path, e))?;
    }
    w.flush().map_err(|e| io_err(&path, e))
}
