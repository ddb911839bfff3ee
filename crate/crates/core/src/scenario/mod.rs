//! Scenario orchestration: inputs, scaling, the rating and dispatch pipeline,
//! and report emission.

mod config;
pub mod io;
mod output;
mod pipeline;
pub mod synthetic;

pub use config::{
    Benchmark, DataPaths, LineSpec, ModeSelection, ReactanceSpec, ScenarioConfig, StorageSpec, WeightOverrides,
    ZoneSpec,
};
pub use io::{load_csv, TimeSeriesTable};
pub use output::{write_comparison, write_run, Manifest};
pub use pipeline::{
    apply_scaling, calibrate, load_inputs, prepare, run, run_mode, sweep, validate, CalibrationRow, Prepared,
    RunArtifacts, ScenarioInputs, SweepOutput, ValidationSummary,
};

use crate::dispatch::DispatchError;
use crate::grid::GridError;
use crate::thermal::ThermalError;
use crate::weather::WeatherError;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScenarioError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("configuration error: {0}")]
    Config(String),
    #[error("{path}: missing columns {missing:?}")]
    Schema { path: String, missing: Vec<String> },
    #[error("{path}: step before {timestamp} is {found_seconds} s, expected {expected_seconds} s")]
    Gap {
        path: String,
        timestamp: String,
        expected_seconds: i64,
        found_seconds: i64,
    },
    #[error("{path}:{line}: {message}")]
    Parse { path: String, line: u64, message: String },
    #[error("weather stage: {0}")]
    Weather(#[from] WeatherError),
    #[error("thermal stage: {0}")]
    Thermal(#[from] ThermalError),
    #[error("grid stage: {0}")]
    Grid(#[from] GridError),
    #[error("dispatch stage ({mode}): {source}")]
    Dispatch { mode: String, source: DispatchError },
}

impl ScenarioError {
    /// 2 for solver failures, 1 for everything caused by the inputs.
    pub fn exit_code(&self) -> i32 {
        match self {
            ScenarioError::Dispatch { source, .. } if source.is_solver_failure() => 2,
            _ => 1,
        }
    }
}

pub(crate) fn read_text(path: &Path) -> Result<String, ScenarioError> {
    std::fs::read_to_string(path).map_err(|e| ScenarioError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

pub(crate) fn create_dir(path: &Path) -> Result<(), ScenarioError> {
    std::fs::create_dir_all(path).map_err(|e| ScenarioError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}
