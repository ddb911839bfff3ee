use super::ScenarioError;
use crate::dispatch::{DispatchWeights, StorageUnit};
use crate::grid::{corridor_susceptance, GridModel, Line, Node, RatingMode};
use crate::thermal::{AmbientConditions, ConductorSpec};
use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReactanceSpec {
    pub x_220_ohm_per_km: f64,
    pub x_380_ohm_per_km: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StorageSpec {
    pub energy_mwh: f64,
    pub power_mw: f64,
    #[serde(default = "default_soc_init")]
    pub soc_init: f64,
}

fn default_soc_init() -> f64 {
    0.5
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZoneSpec {
    pub id: String,
    pub name: String,
    pub dispatchable_mw: f64,
    /// Mean global radiation over the data period, W/m².
    pub s_mean_w_m2: f64,
    #[serde(default)]
    pub southern_import: bool,
    #[serde(default)]
    pub storage: Option<StorageSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LineSpec {
    pub from: String,
    pub to: String,
    pub length_km: f64,
    #[serde(default)]
    pub circuits_220: u32,
    #[serde(default)]
    pub circuits_380: u32,
    pub nlr_mva: f64,
}

/// The benchmark grid: zones, corridors, conductor and dispatch weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Benchmark {
    pub name: String,
    pub base_mva: f64,
    pub slack: String,
    #[serde(default = "default_utc_offset")]
    pub utc_offset_hours: i32,
    #[serde(default = "default_wind_angle")]
    pub wind_angle_deg: f64,
    #[serde(default = "default_round_trip")]
    pub storage_round_trip: f64,
    pub conductor: ConductorSpec,
    pub nlr_reference: AmbientConditions,
    pub reactance: ReactanceSpec,
    #[serde(default)]
    pub weights: DispatchWeights,
    pub zones: Vec<ZoneSpec>,
    pub lines: Vec<LineSpec>,
}

fn default_utc_offset() -> i32 {
    1
}

fn default_wind_angle() -> f64 {
    crate::weather::DEFAULT_WIND_ANGLE
}

fn default_round_trip() -> f64 {
    0.75
}

impl Benchmark {
    pub fn from_toml(text: &str) -> Result<Self, ScenarioError> {
        let b: Benchmark = toml::from_str(text).map_err(|e| ScenarioError::Config(format!("benchmark: {e}")))?;
        b.validate()?;
        Ok(b)
    }

    pub fn load(path: &Path) -> Result<Self, ScenarioError> {
        Self::from_toml(&super::read_text(path)?)
    }

    /// The benchmark shipped with the crate.
    pub fn shipped() -> Self {
        Self::from_toml(include_str!("../../data/benchmark.toml")).expect("shipped benchmark is valid")
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        let err = |m: String| Err(ScenarioError::Config(m));
        self.conductor
            .validate()
            .map_err(|e| ScenarioError::Config(format!("conductor: {e}")))?;
        self.nlr_reference
            .validate()
            .map_err(|e| ScenarioError::Config(format!("nlr_reference: {e}")))?;
        if !(self.storage_round_trip > 0.0 && self.storage_round_trip <= 1.0) {
            return err(format!("storage_round_trip {}", self.storage_round_trip));
        }
        if !(0.0..=90.0).contains(&self.wind_angle_deg) {
            return err(format!("wind_angle_deg {}", self.wind_angle_deg));
        }
        if !self.zones.iter().any(|z| z.id == self.slack) {
            return err(format!("slack '{}' is not a zone", self.slack));
        }
        for z in &self.zones {
            if !(z.dispatchable_mw >= 0.0) || !(z.s_mean_w_m2 > 0.0) {
                return err(format!("zone {}: capacities and s_mean must be positive", z.id));
            }
        }
        for l in &self.lines {
            if !(l.length_km > 0.0) {
                return err(format!("line {}-{}: length {}", l.from, l.to, l.length_km));
            }
        }
        if !(self.reactance.x_220_ohm_per_km > 0.0 && self.reactance.x_380_ohm_per_km > 0.0) {
            return err("reactances must be positive".into());
        }
        self.grid_model().map(|_| ())
    }

    pub fn zone_ids(&self) -> Vec<String> {
        self.zones.iter().map(|z| z.id.clone()).collect()
    }

    pub fn slack_index(&self) -> usize {
        self.zones.iter().position(|z| z.id == self.slack).unwrap_or(0)
    }

    pub fn southern_import_zones(&self) -> Vec<String> {
        self.zones.iter().filter(|z| z.southern_import).map(|z| z.id.clone()).collect()
    }

    pub fn grid_model(&self) -> Result<GridModel, ScenarioError> {
        let nodes: Vec<Node> = self
            .zones
            .iter()
            .map(|z| Node {
                id: z.id.clone(),
                name: z.name.clone(),
            })
            .collect();
        let index = |id: &str| {
            self.zones
                .iter()
                .position(|z| z.id == id)
                .ok_or_else(|| ScenarioError::Config(format!("line endpoint '{id}' is not a zone")))
        };
        let mut lines = Vec::with_capacity(self.lines.len());
        for l in &self.lines {
            lines.push(Line {
                from: index(&l.from)?,
                to: index(&l.to)?,
                circuits_220: l.circuits_220,
                circuits_380: l.circuits_380,
                susceptance: corridor_susceptance(
                    l.length_km,
                    l.circuits_220,
                    l.circuits_380,
                    self.reactance.x_220_ohm_per_km,
                    self.reactance.x_380_ohm_per_km,
                    self.base_mva,
                ),
                nlr_mva: l.nlr_mva,
            });
        }
        GridModel::new(nodes, lines, self.base_mva).map_err(ScenarioError::Grid)
    }

    pub fn storage_units(&self) -> Vec<Option<StorageUnit>> {
        self.zones
            .iter()
            .map(|z| {
                z.storage
                    .as_ref()
                    .map(|s| StorageUnit::symmetric(s.energy_mwh, s.power_mw, self.storage_round_trip, s.soc_init))
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeSelection {
    Nlr,
    Dlr,
    Both,
}

impl ModeSelection {
    pub fn modes(self) -> Vec<RatingMode> {
        match self {
            ModeSelection::Nlr => vec![RatingMode::Nlr],
            ModeSelection::Dlr => vec![RatingMode::Dlr],
            ModeSelection::Both => vec![RatingMode::Nlr, RatingMode::Dlr],
        }
    }
}

impl From<RatingMode> for ModeSelection {
    fn from(m: RatingMode) -> Self {
        match m {
            RatingMode::Nlr => ModeSelection::Nlr,
            RatingMode::Dlr => ModeSelection::Dlr,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataPaths {
    pub wind: PathBuf,
    pub pv: PathBuf,
    pub load: PathBuf,
    pub tmin: PathBuf,
    pub tmax: PathBuf,
}

/// Partial override of the benchmark's dispatch weights.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightOverrides {
    pub shed: Option<f64>,
    pub curtailment: Option<f64>,
    pub generation: Option<f64>,
    pub storage_throughput: Option<f64>,
    pub ramp: Option<f64>,
    pub generation_quadratic: Option<f64>,
    pub soc_tracking: Option<f64>,
    pub soc_ref: Option<f64>,
}

impl WeightOverrides {
    pub fn apply(&self, w: DispatchWeights) -> DispatchWeights {
        DispatchWeights {
            shed: self.shed.unwrap_or(w.shed),
            curtailment: self.curtailment.unwrap_or(w.curtailment),
            generation: self.generation.unwrap_or(w.generation),
            storage_throughput: self.storage_throughput.unwrap_or(w.storage_throughput),
            ramp: self.ramp.unwrap_or(w.ramp),
            generation_quadratic: self.generation_quadratic.unwrap_or(w.generation_quadratic),
            soc_tracking: self.soc_tracking.unwrap_or(w.soc_tracking),
            soc_ref: self.soc_ref.unwrap_or(w.soc_ref),
        }
    }
}

/// One simulation run. Relative paths are resolved against the directory of
/// the config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub benchmark: PathBuf,
    /// First simulated step, UTC.
    pub start: DateTime<Utc>,
    /// End of the simulated span (exclusive), UTC.
    pub end: DateTime<Utc>,
    #[serde(default = "default_mode")]
    pub rating_mode: ModeSelection,
    #[serde(default = "one")]
    pub res_scale: f64,
    #[serde(default = "one")]
    pub disp_scale: f64,
    #[serde(default = "default_horizon")]
    pub horizon: usize,
    pub out: PathBuf,
    pub data: DataPaths,
    #[serde(default)]
    pub weights: WeightOverrides,
    /// Optional per-zone ramp limit, MW per step.
    #[serde(default)]
    pub ramp_limit_mw: Option<Vec<f64>>,
}

fn default_mode() -> ModeSelection {
    ModeSelection::Both
}

fn one() -> f64 {
    1.0
}

fn default_horizon() -> usize {
    256
}

impl ScenarioConfig {
    pub fn from_toml(text: &str) -> Result<Self, ScenarioError> {
        let c: ScenarioConfig = toml::from_str(text).map_err(|e| ScenarioError::Config(format!("scenario: {e}")))?;
        c.validate()?;
        Ok(c)
    }

    /// Parse `path` and resolve relative paths against its directory.
    pub fn load(path: &Path) -> Result<Self, ScenarioError> {
        let mut c = Self::from_toml(&super::read_text(path)?)?;
        let base = path.parent().unwrap_or(Path::new("."));
        c.resolve_paths(base);
        Ok(c)
    }

    pub fn resolve_paths(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        fix(&mut self.benchmark);
        fix(&mut self.out);
        fix(&mut self.data.wind);
        fix(&mut self.data.pv);
        fix(&mut self.data.load);
        fix(&mut self.data.tmin);
        fix(&mut self.data.tmax);
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        let err = |m: String| Err(ScenarioError::Config(m));
        if self.end <= self.start {
            return err(format!("empty span {} .. {}", self.start, self.end));
        }
        if !(self.res_scale > 0.0) || !(self.disp_scale > 0.0) {
            return err(format!(
                "scale factors must be positive (res {}, disp {})",
                self.res_scale, self.disp_scale
            ));
        }
        if self.horizon == 0 {
            return err("horizon must be at least one step".into());
        }
        Ok(())
    }
}
