use super::io::{load_csv, TimeSeriesTable};
use super::{Benchmark, ScenarioConfig, ScenarioError};
use crate::dispatch::{
    curtailment_report, receding_horizon_run, CurtailmentReport, DispatchProblem, DispatchResult, DispatchSettings,
    PowerNodeFleet, ZoneFleet,
};
use crate::grid::{build_ptdf, calibrate_to_nlr, corridor_mva, rating_series, Calibration, GridModel, PtdfMatrix};
use crate::grid::{RatingMode, RatingSeries, CALIBRATION_SANITY_BAND};
use crate::thermal::{ampacity, sensitivity_fit, AmbientConditions, ConductorSpec, SensitivityFit, SweepParameter};
use crate::weather::{
    calibrate_wind, reconstruct_zone, DailyTempRecord, FeedInSeries, ReconstructionSettings, SolarCalibration,
    ZoneWeatherInputs,
};
use chrono::{DateTime, Utc};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::path::Path;

const STEP_SECONDS: i64 = 900;
const DAY_SECONDS: i64 = 86_400;

/// Validated input tables of a scenario and their content hashes.
#[derive(Debug, Clone)]
pub struct ScenarioInputs {
    pub benchmark: Benchmark,
    pub wind: TimeSeriesTable,
    pub pv: TimeSeriesTable,
    pub load: TimeSeriesTable,
    pub tmin: TimeSeriesTable,
    pub tmax: TimeSeriesTable,
    /// File name → SHA-256 of its bytes, benchmark included.
    pub hashes: BTreeMap<String, String>,
}

fn sha256_file(path: &Path) -> Result<String, ScenarioError> {
    let bytes = std::fs::read(path).map_err(|e| ScenarioError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

pub fn load_inputs(config: &ScenarioConfig) -> Result<ScenarioInputs, ScenarioError> {
    let benchmark = Benchmark::load(&config.benchmark)?;
    let zones = benchmark.zone_ids();
    let d = &config.data;
    let wind = load_csv(&d.wind, &zones, STEP_SECONDS)?;
    let pv = load_csv(&d.pv, &zones, STEP_SECONDS)?;
    let load = load_csv(&d.load, &zones, STEP_SECONDS)?;
    let tmin = load_csv(&d.tmin, &zones, DAY_SECONDS)?;
    let tmax = load_csv(&d.tmax, &zones, DAY_SECONDS)?;
    for (name, t) in [("pv", &pv), ("load", &load)] {
        if t.timestamps != wind.timestamps {
            return Err(ScenarioError::Config(format!(
                "{name} series is not aligned with the wind series"
            )));
        }
    }
    if tmin.timestamps != tmax.timestamps {
        return Err(ScenarioError::Config("tmin and tmax dates differ".into()));
    }
    for (name, t) in [("wind", &wind), ("pv", &pv), ("load", &load)] {
        if let Some((z, v)) = t
            .values
            .iter()
            .enumerate()
            .find_map(|(z, c)| c.iter().find(|v| **v < 0.0).map(|v| (z, *v)))
        {
            return Err(ScenarioError::Config(format!("{name} zone {} has negative value {v}", zones[z])));
        }
    }
    let mut hashes = BTreeMap::new();
    for p in [&config.benchmark, &d.wind, &d.pv, &d.load, &d.tmin, &d.tmax] {
        let key = p.file_name().map_or_else(|| p.display().to_string(), |n| n.to_string_lossy().into_owned());
        hashes.insert(key, sha256_file(p)?);
    }
    Ok(ScenarioInputs {
        benchmark,
        wind,
        pv,
        load,
        tmin,
        tmax,
        hashes,
    })
}

/// Scale RES feed-in by `res_scale` and dispatchable capacity by
/// `disp_scale`; loads and storage are untouched.
pub fn apply_scaling(fleet: &PowerNodeFleet, config: &ScenarioConfig) -> PowerNodeFleet {
    scale_fleet(fleet, config.res_scale, config.disp_scale)
}

pub(crate) fn scale_fleet(fleet: &PowerNodeFleet, res_scale: f64, disp_scale: f64) -> PowerNodeFleet {
    PowerNodeFleet {
        zones: fleet
            .zones
            .iter()
            .map(|z| ZoneFleet {
                id: z.id.clone(),
                dispatchable_mw: z.dispatchable_mw * disp_scale,
                storage: z.storage,
                wind: z.wind.iter().map(|v| v * res_scale).collect(),
                pv: z.pv.iter().map(|v| v * res_scale).collect(),
                load: z.load.clone(),
            })
            .collect(),
    }
}

/// Everything derived from the inputs that both rating modes share.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub benchmark: Benchmark,
    pub model: GridModel,
    pub ptdf: PtdfMatrix,
    pub calibration: Calibration,
    /// Scaled fleet from the first simulated step to the end of the data.
    pub fleet: PowerNodeFleet,
    /// `ambients[zone][step]`, aligned with `fleet`.
    pub ambients: Vec<Vec<AmbientConditions>>,
    pub timestamps: Vec<DateTime<Utc>>,
    pub sim_steps: usize,
    pub settings: DispatchSettings,
}

pub fn prepare(config: &ScenarioConfig, inputs: &ScenarioInputs) -> Result<Prepared, ScenarioError> {
    let b = &inputs.benchmark;
    let model = b.grid_model()?;
    let ptdf = build_ptdf(&model, b.slack_index())?;
    let calibration = calibrate_to_nlr(&model, &b.conductor, &b.nlr_reference)?;

    let first = inputs.wind.index_of(config.start).ok_or_else(|| {
        ScenarioError::Config(format!(
            "start {} is not a step of the input series",
            super::io::format_timestamp(config.start)
        ))
    })?;
    let span = (config.end - config.start).num_seconds();
    if span % STEP_SECONDS != 0 {
        return Err(ScenarioError::Config("span is not a whole number of steps".into()));
    }
    let sim_steps = (span / STEP_SECONDS) as usize;
    let available = inputs.wind.len() - first;
    if sim_steps > available {
        return Err(ScenarioError::Config(format!(
            "span needs {sim_steps} steps from the start, data has {available}"
        )));
    }
    if available < sim_steps + config.horizon - 1 {
        log::info!(
            "data ends {} steps before the last window would; windows shrink at the end",
            sim_steps + config.horizon - 1 - available
        );
    }

    let storage = b.storage_units();
    let mut zones = Vec::with_capacity(b.zones.len());
    let mut ambients = Vec::with_capacity(b.zones.len());
    let settings_w = ReconstructionSettings {
        wind_angle_deg: b.wind_angle_deg,
        utc_offset_hours: b.utc_offset_hours,
    };
    for (z, spec) in b.zones.iter().enumerate() {
        let col = |t: &TimeSeriesTable| t.values[z].clone();
        let full_wind = FeedInSeries::new(&spec.id, STEP_SECONDS, col(&inputs.wind))?;
        let full_pv = FeedInSeries::new(&spec.id, STEP_SECONDS, col(&inputs.pv))?;
        let wind_cal = calibrate_wind(&full_wind)?;
        let solar_cal = SolarCalibration::from_series(spec.s_mean_w_m2, &full_pv)?;
        let mut daily = Vec::with_capacity(inputs.tmin.len());
        for (r, t) in inputs.tmin.timestamps.iter().enumerate() {
            daily.push(DailyTempRecord::new(t.date_naive(), inputs.tmin.values[z][r], inputs.tmax.values[z][r])?);
        }
        let wind = FeedInSeries::new(&spec.id, STEP_SECONDS, full_wind.values[first..].to_vec())?;
        let pv = FeedInSeries::new(&spec.id, STEP_SECONDS, full_pv.values[first..].to_vec())?;
        let amb = reconstruct_zone(
            &ZoneWeatherInputs {
                start: inputs.wind.timestamps[first],
                wind: &wind,
                pv: &pv,
                wind_calibration: wind_cal,
                solar_calibration: solar_cal,
                daily: &daily,
            },
            &settings_w,
        )?;
        ambients.push(amb);
        zones.push(ZoneFleet {
            id: spec.id.clone(),
            dispatchable_mw: spec.dispatchable_mw,
            storage: storage[z],
            wind: wind.values,
            pv: pv.values,
            load: inputs.load.values[z][first..].to_vec(),
        });
    }
    let fleet = PowerNodeFleet::new(zones).map_err(|e| ScenarioError::Dispatch {
        mode: "setup".into(),
        source: e,
    })?;
    let settings = DispatchSettings {
        horizon: config.horizon,
        step_hours: STEP_SECONDS as f64 / 3600.0,
        weights: config.weights.apply(b.weights),
        ramp_limit_mw: config.ramp_limit_mw.clone(),
    };
    Ok(Prepared {
        benchmark: b.clone(),
        model,
        ptdf,
        calibration,
        fleet: scale_fleet(&fleet, config.res_scale, config.disp_scale),
        ambients,
        timestamps: inputs.wind.timestamps[first..].to_vec(),
        sim_steps,
        settings,
    })
}

/// Outputs of one rating mode.
#[derive(Debug, Clone)]
pub struct RunArtifacts {
    pub mode: RatingMode,
    pub ratings: RatingSeries,
    pub result: DispatchResult,
    pub report: CurtailmentReport,
    /// Timestamps of the simulated steps.
    pub timestamps: Vec<DateTime<Utc>>,
}

pub fn run_mode(prepared: &Prepared, mode: RatingMode) -> Result<RunArtifacts, ScenarioError> {
    let b = &prepared.benchmark;
    let ratings = rating_series(&prepared.model, &b.conductor, &prepared.calibration, &prepared.ambients, mode)?;
    let problem = DispatchProblem {
        fleet: &prepared.fleet,
        ptdf: &prepared.ptdf,
        line_limits: &ratings.limits,
        settings: &prepared.settings,
    };
    let started = std::time::Instant::now();
    let result = receding_horizon_run(&problem, prepared.sim_steps).map_err(|e| ScenarioError::Dispatch {
        mode: mode.to_string(),
        source: e,
    })?;
    log::info!(
        "{mode}: {} steps dispatched in {:.1} s",
        prepared.sim_steps,
        started.elapsed().as_secs_f64()
    );
    let report = curtailment_report(&result, &prepared.fleet, prepared.settings.step_hours);
    Ok(RunArtifacts {
        mode,
        ratings: ratings.window(0, prepared.sim_steps),
        result,
        report,
        timestamps: prepared.timestamps[..prepared.sim_steps].to_vec(),
    })
}

/// Run every configured rating mode (concurrently when there are two) and
/// write their outputs under `config.out/<mode>/`.
pub fn run(config: &ScenarioConfig) -> Result<Vec<RunArtifacts>, ScenarioError> {
    let inputs = load_inputs(config)?;
    let prepared = prepare(config, &inputs)?;
    let modes = config.rating_mode.modes();
    let results: Vec<Result<RunArtifacts, ScenarioError>> = std::thread::scope(|s| {
        let handles: Vec<_> = modes
            .iter()
            .map(|&m| {
                let p = &prepared;
                s.spawn(move || run_mode(p, m))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("dispatch thread panicked"))
            .collect()
    });
    let artifacts = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    super::create_dir(&config.out)?;
    for a in &artifacts {
        super::write_run(&config.out.join(a.mode.as_str()), config, &inputs, &prepared, a)?;
    }
    if artifacts.len() == 2 {
        super::write_comparison(&config.out.join("comparison.csv"), &artifacts[0], &artifacts[1])?;
    }
    Ok(artifacts)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationSummary {
    pub zones: usize,
    pub lines: usize,
    pub data_steps: usize,
    pub sim_steps: usize,
    pub calibration_factors: Vec<(String, f64)>,
    /// Lines whose calibration factor lies outside the sanity band.
    pub suspicious_lines: Vec<String>,
}

/// Parse and cross-check every input without dispatching.
pub fn validate(config: &ScenarioConfig) -> Result<ValidationSummary, ScenarioError> {
    let inputs = load_inputs(config)?;
    let prepared = prepare(config, &inputs)?;
    let (lo, hi) = CALIBRATION_SANITY_BAND;
    let factors: Vec<(String, f64)> = prepared
        .calibration
        .factors
        .iter()
        .enumerate()
        .map(|(i, &f)| (prepared.model.line_label(i), f))
        .collect();
    Ok(ValidationSummary {
        zones: prepared.model.nodes().len(),
        lines: prepared.model.lines().len(),
        data_steps: inputs.wind.len(),
        sim_steps: prepared.sim_steps,
        suspicious_lines: factors
            .iter()
            .filter(|(_, f)| !(lo..=hi).contains(f))
            .map(|(l, _)| l.clone())
            .collect(),
        calibration_factors: factors,
    })
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct CalibrationRow {
    pub line: String,
    pub circuits_220: u32,
    pub circuits_380: u32,
    pub nlr_mva: f64,
    /// Uncalibrated corridor rating under the reference ambient.
    pub raw_mva: f64,
    pub factor: f64,
    pub in_band: bool,
}

pub fn calibrate(benchmark: &Benchmark) -> Result<Vec<CalibrationRow>, ScenarioError> {
    let model = benchmark.grid_model()?;
    let cal = calibrate_to_nlr(&model, &benchmark.conductor, &benchmark.nlr_reference)?;
    let i_ref = ampacity(&benchmark.conductor, &benchmark.nlr_reference).ac;
    let (lo, hi) = CALIBRATION_SANITY_BAND;
    Ok(model
        .lines()
        .iter()
        .zip(&cal.factors)
        .enumerate()
        .map(|(i, (l, &f))| CalibrationRow {
            line: model.line_label(i),
            circuits_220: l.circuits_220,
            circuits_380: l.circuits_380,
            nlr_mva: l.nlr_mva,
            raw_mva: corridor_mva(l, i_ref),
            factor: f,
            in_band: (lo..=hi).contains(&f),
        })
        .collect())
}

#[derive(Debug, Clone)]
pub struct SweepOutput {
    pub fits: Vec<SensitivityFit>,
}

/// Rating-versus-parameter sweeps over each parameter's full domain, written
/// as `sweep_<parameter>.csv` plus a `sensitivity.csv` summary when `out` is
/// given.
pub fn sweep(
    spec: &ConductorSpec,
    base: &AmbientConditions,
    parameters: &[SweepParameter],
    points: usize,
    out: Option<&Path>,
) -> Result<SweepOutput, ScenarioError> {
    let mut fits = Vec::with_capacity(parameters.len());
    for &p in parameters {
        fits.push(sensitivity_fit(spec, base, p, p.domain(), points)?);
    }
    if let Some(dir) = out {
        super::create_dir(dir)?;
        super::output::write_sweeps(dir, &fits)?;
    }
    Ok(SweepOutput { fits })
}
