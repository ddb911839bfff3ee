//! Receding-horizon economic dispatch over a zonal DC network.
//!
//! Every zone is a Power Node bundle: one dispatchable generator, wind and PV
//! feed-in that may be curtailed, a load that may be shed, and optionally a
//! pumped-storage unit. The only dynamic state is storage state of charge,
//! which integrates efficiency-weighted charge and discharge:
//!
//! ```text
//! soc(l+1) = soc(l) + (η_c·charge(l) − discharge(l)/η_d) · Δt / E
//! ```
//!
//! Each window minimises
//!
//! ```text
//! Σ_l  Q_x·(soc(l+1) − x_ref)²
//!    + Δt·(c_gen·g + c_curt·(cw + cp) + c_shed·shed + c_stor·(charge + discharge))
//!    + c_ramp·(g(l) − g(l−1))²  [+ c_quad·g²]
//! ```
//!
//! subject to the lossless nodal balance, PTDF flow limits and box bounds.
//! Shedding and curtailment are penalised slacks, so every window is feasible
//! whenever the ramp limits are not binding.

mod horizon;
mod qp;
mod report;
mod solver;

pub use horizon::{receding_horizon_from, receding_horizon_run, solve_step, DispatchResult, StepRecord};
pub use qp::{build_qp, ControlKind, QpInstance, SparseRows, VariableLayout};
pub use report::{curtailment_report, CurtailmentReport, ZoneCurtailment};
pub use solver::{solve_qp, QpSolution, QpStatus};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DispatchError {
    #[error("inconsistent bounds: {0}")]
    InfeasibleBounds(String),
    #[error("invalid fleet: {0}")]
    InvalidFleet(String),
    #[error("series do not cover the window: {0}")]
    HorizonMismatch(String),
    #[error("QP infeasible at step {step}")]
    Infeasible { step: usize },
    #[error("QP solver hit the iteration limit at step {step}")]
    MaxIterations { step: usize },
    #[error("QP solver failed at step {step}: {reason}")]
    SolverFailure { step: usize, reason: String },
}

impl DispatchError {
    /// Attach the simulation step to a solver error raised without one.
    pub fn at_step(self, step: usize) -> Self {
        match self {
            DispatchError::Infeasible { .. } => DispatchError::Infeasible { step },
            DispatchError::MaxIterations { .. } => DispatchError::MaxIterations { step },
            DispatchError::SolverFailure { reason, .. } => DispatchError::SolverFailure { step, reason },
            other => other,
        }
    }

    pub fn is_solver_failure(&self) -> bool {
        matches!(
            self,
            DispatchError::Infeasible { .. }
                | DispatchError::MaxIterations { .. }
                | DispatchError::SolverFailure { .. }
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StorageUnit {
    pub energy_mwh: f64,
    pub charge_mw: f64,
    pub discharge_mw: f64,
    pub eta_charge: f64,
    pub eta_discharge: f64,
    pub soc_init: f64,
}

impl StorageUnit {
    /// Round-trip efficiency split evenly between charging and discharging.
    pub fn symmetric(energy_mwh: f64, power_mw: f64, round_trip: f64, soc_init: f64) -> Self {
        let eta = round_trip.sqrt();
        Self {
            energy_mwh,
            charge_mw: power_mw,
            discharge_mw: power_mw,
            eta_charge: eta,
            eta_discharge: eta,
            soc_init,
        }
    }

    fn validate(&self, zone: &str) -> Result<(), DispatchError> {
        let bad = |what: String| Err(DispatchError::InvalidFleet(format!("zone {zone}: {what}")));
        if !(self.energy_mwh > 0.0) {
            return bad(format!("storage energy {} MWh", self.energy_mwh));
        }
        if !(self.charge_mw >= 0.0 && self.discharge_mw >= 0.0) {
            return bad("negative storage power".into());
        }
        for eta in [self.eta_charge, self.eta_discharge] {
            if !(eta > 0.0 && eta <= 1.0) {
                return bad(format!("storage efficiency {eta}"));
            }
        }
        if !(0.0..=1.0).contains(&self.soc_init) {
            return bad(format!("initial state of charge {}", self.soc_init));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZoneFleet {
    pub id: String,
    pub dispatchable_mw: f64,
    pub storage: Option<StorageUnit>,
    /// Available wind feed-in per step, MW.
    pub wind: Vec<f64>,
    pub pv: Vec<f64>,
    pub load: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerNodeFleet {
    pub zones: Vec<ZoneFleet>,
}

impl PowerNodeFleet {
    pub fn new(zones: Vec<ZoneFleet>) -> Result<Self, DispatchError> {
        let fleet = Self { zones };
        fleet.validate()?;
        Ok(fleet)
    }

    pub fn steps(&self) -> usize {
        self.zones.first().map_or(0, |z| z.load.len())
    }

    pub fn validate(&self) -> Result<(), DispatchError> {
        if self.zones.is_empty() {
            return Err(DispatchError::InvalidFleet("no zones".into()));
        }
        let steps = self.steps();
        for z in &self.zones {
            if !(z.dispatchable_mw >= 0.0) {
                return Err(DispatchError::InvalidFleet(format!(
                    "zone {}: dispatchable capacity {}",
                    z.id, z.dispatchable_mw
                )));
            }
            for (name, s) in [("wind", &z.wind), ("pv", &z.pv), ("load", &z.load)] {
                if s.len() != steps {
                    return Err(DispatchError::HorizonMismatch(format!(
                        "zone {} {name} has {} steps, expected {steps}",
                        z.id,
                        s.len()
                    )));
                }
                if let Some(v) = s.iter().find(|v| !(**v >= 0.0) || !v.is_finite()) {
                    return Err(DispatchError::InvalidFleet(format!("zone {} {name} value {v}", z.id)));
                }
            }
            if let Some(st) = &z.storage {
                st.validate(&z.id)?;
            }
        }
        Ok(())
    }

    pub fn total_dispatchable(&self) -> f64 {
        self.zones.iter().map(|z| z.dispatchable_mw).sum()
    }
}

/// Cost weights. Linear terms are per MWh, quadratic ramp and generation
/// terms per MW² per step, state tracking per unit SoC² per step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DispatchWeights {
    pub shed: f64,
    pub curtailment: f64,
    pub generation: f64,
    pub storage_throughput: f64,
    pub ramp: f64,
    pub generation_quadratic: f64,
    pub soc_tracking: f64,
    pub soc_ref: f64,
}

impl Default for DispatchWeights {
    fn default() -> Self {
        Self {
            shed: 10_000.0,
            curtailment: 100.0,
            generation: 10.0,
            storage_throughput: 20.0,
            ramp: 1e-4,
            generation_quadratic: 0.0,
            soc_tracking: 10.0,
            soc_ref: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DispatchSettings {
    /// Window length N in steps.
    pub horizon: usize,
    pub step_hours: f64,
    pub weights: DispatchWeights,
    /// Per-zone bound on |g(l) − g(l−1)|, MW. `None` leaves ramping bounded
    /// by capacity only.
    pub ramp_limit_mw: Option<Vec<f64>>,
}

impl Default for DispatchSettings {
    fn default() -> Self {
        Self {
            horizon: 256,
            step_hours: 0.25,
            weights: DispatchWeights::default(),
            ramp_limit_mw: None,
        }
    }
}

impl DispatchSettings {
    pub fn with_horizon(horizon: usize) -> Self {
        Self {
            horizon,
            ..Self::default()
        }
    }
}

/// State carried from one window to the next.
#[derive(Debug, Clone, PartialEq)]
pub struct DispatchState {
    /// Per zone; ignored for zones without storage.
    pub soc: Vec<f64>,
    /// Dispatchable output applied in the previous step, if any.
    pub previous_generation: Option<Vec<f64>>,
}

impl DispatchState {
    pub fn initial(fleet: &PowerNodeFleet) -> Self {
        Self {
            soc: fleet
                .zones
                .iter()
                .map(|z| z.storage.map_or(0.0, |s| s.soc_init))
                .collect(),
            previous_generation: None,
        }
    }
}

/// Everything a window needs besides the state.
#[derive(Debug, Clone, Copy)]
pub struct DispatchProblem<'a> {
    pub fleet: &'a PowerNodeFleet,
    pub ptdf: &'a crate::grid::PtdfMatrix,
    /// `limits[line][step]`, MW; the lower bound is the negated limit.
    pub line_limits: &'a [Vec<f64>],
    pub settings: &'a DispatchSettings,
}
