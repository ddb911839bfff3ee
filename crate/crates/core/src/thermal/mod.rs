//! Steady-state heat balance of a bare overhead conductor.
//!
//! The balance is `P_J + P_S = P_c + P_r`: Joule and solar heating against
//! convective and radiative cooling, all per metre of conductor. The rating
//! is the current that holds the conductor exactly at its temperature limit.
//! Surface and average conductor temperature are treated as one value.

pub mod air;
pub mod sensitivity;
pub mod solver;

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

pub use sensitivity::{sensitivity_fit, sweep, SensitivityFit, SweepParameter, SweepPoint};
pub use solver::{solve_temperature, steady_state_temperature, TemperatureSolution};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ThermalError {
    #[error("invalid conductor: {0}")]
    InvalidConductor(String),
    #[error("invalid ambient conditions: {0}")]
    InvalidAmbient(String),
    #[error("solar heating exceeds cooling at the temperature limit by {deficit:.3} W/m")]
    NegativeHeadroom { deficit: f64 },
    #[error("temperature solver did not converge after {iterations} iterations")]
    NoConvergence { iterations: u32 },
    #[error("heat balance has no root above air temperature {air_temp} °C")]
    NonPhysical { air_temp: f64 },
    #[error("sweep needs at least 3 points, got {0}")]
    DegenerateRange(usize),
    #[error("sweep range [{lo}, {hi}] outside the supported domain for {parameter}")]
    OutOfDomain {
        parameter: &'static str,
        lo: f64,
        hi: f64,
    },
}

/// Physical and electrical parameters of one conductor type.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConductorSpec {
    #[serde(default)]
    pub name: String,
    /// Outer diameter, m.
    pub diameter_m: f64,
    /// DC resistance at 20 °C, Ω/m.
    pub r_dc_20: f64,
    /// Temperature coefficient of resistance, 1/°C.
    pub alpha_r: f64,
    pub absorptivity: f64,
    pub emissivity: f64,
    /// Maximum allowable average conductor temperature, °C.
    pub t_max: f64,
    /// Surface roughness `d / (2 (D - d))` with `d` the outer strand diameter.
    pub surface_roughness: f64,
}

impl ConductorSpec {
    /// 428-A1/S1A-54/7 "Zebra" ACSR at a 75 °C limit, datasheet values.
    pub fn zebra() -> Self {
        Self {
            name: "428-A1/S1A-54/7 Zebra".to_string(),
            diameter_m: 0.02862,
            r_dc_20: 6.868e-5,
            alpha_r: 0.004,
            absorptivity: 0.5,
            emissivity: 0.5,
            t_max: 75.0,
            // outer aluminium strands are 3.18 mm
            surface_roughness: 0.00318 / (2.0 * (0.02862 - 0.00318)),
        }
    }

    pub fn validate(&self) -> Result<(), ThermalError> {
        let bad = |msg: &str| Err(ThermalError::InvalidConductor(msg.to_string()));
        if !(self.diameter_m > 0.0) {
            return bad("diameter must be positive");
        }
        if !(self.r_dc_20 > 0.0) {
            return bad("DC resistance must be positive");
        }
        if !(0.0..=1.0).contains(&self.absorptivity) {
            return bad("absorptivity must lie in [0, 1]");
        }
        if !(0.0..=1.0).contains(&self.emissivity) {
            return bad("emissivity must lie in [0, 1]");
        }
        if !(self.t_max > 40.0) {
            return bad("temperature limit must exceed 40 °C");
        }
        if !self.alpha_r.is_finite() || !(self.surface_roughness >= 0.0) {
            return bad("alpha_r and surface roughness must be finite and non-negative");
        }
        Ok(())
    }

    /// Resistance per metre at average temperature `t_av`.
    pub fn resistance_at(&self, t_av: f64) -> f64 {
        self.r_dc_20 * (1.0 + self.alpha_r * (t_av - 20.0))
    }
}

/// Weather at one zone and time step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AmbientConditions {
    /// m/s
    pub wind_speed: f64,
    /// Angle between wind and conductor axis, degrees in [0, 90].
    pub wind_angle_deg: f64,
    /// Global radiation, W/m².
    pub solar_radiation: f64,
    /// °C
    pub air_temp: f64,
}

impl AmbientConditions {
    pub fn new(
        wind_speed: f64,
        wind_angle_deg: f64,
        solar_radiation: f64,
        air_temp: f64,
    ) -> Result<Self, ThermalError> {
        let amb = Self {
            wind_speed,
            wind_angle_deg,
            solar_radiation,
            air_temp,
        };
        amb.validate()?;
        Ok(amb)
    }

    pub fn validate(&self) -> Result<(), ThermalError> {
        let bad = |msg: String| Err(ThermalError::InvalidAmbient(msg));
        if !(self.wind_speed >= 0.0) || !self.wind_speed.is_finite() {
            return bad(format!("wind speed {}", self.wind_speed));
        }
        if !(0.0..=90.0).contains(&self.wind_angle_deg) {
            return bad(format!("wind angle {}", self.wind_angle_deg));
        }
        if !(self.solar_radiation >= 0.0) || !self.solar_radiation.is_finite() {
            return bad(format!("solar radiation {}", self.solar_radiation));
        }
        if !(-60.0..=60.0).contains(&self.air_temp) {
            return bad(format!("air temperature {}", self.air_temp));
        }
        Ok(())
    }

    pub fn with(mut self, parameter: SweepParameter, value: f64) -> Self {
        match parameter {
            SweepParameter::AirTemp => self.air_temp = value,
            SweepParameter::WindSpeed => self.wind_speed = value,
            SweepParameter::WindAngle => self.wind_angle_deg = value,
            SweepParameter::Solar => self.solar_radiation = value,
        }
        self
    }

    pub fn get(&self, parameter: SweepParameter) -> f64 {
        match parameter {
            SweepParameter::AirTemp => self.air_temp,
            SweepParameter::WindSpeed => self.wind_speed,
            SweepParameter::WindAngle => self.wind_angle_deg,
            SweepParameter::Solar => self.solar_radiation,
        }
    }
}

/// The four terms of the heat balance, W/m.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatBalanceTerms {
    pub p_joule: f64,
    pub p_solar: f64,
    pub p_conv: f64,
    pub p_rad: f64,
}

impl HeatBalanceTerms {
    /// Cooling minus heating. Zero at steady state, positive when the
    /// conductor is hotter than its equilibrium.
    pub fn residual(&self) -> f64 {
        (self.p_conv + self.p_rad) - (self.p_joule + self.p_solar)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvectiveCooling {
    /// W/m
    pub power: f64,
    /// The larger of the natural and forced Nusselt numbers.
    pub nusselt: f64,
}

pub fn joule_heating(spec: &ConductorSpec, i_dc: f64, t_av: f64) -> f64 {
    i_dc * i_dc * spec.resistance_at(t_av)
}

pub fn solar_heating(spec: &ConductorSpec, amb: &AmbientConditions) -> f64 {
    spec.absorptivity * amb.solar_radiation * spec.diameter_m
}

/// Convective cooling at surface temperature `t_s`. Clamped at zero when the
/// conductor is colder than the air.
pub fn convective_cooling(
    spec: &ConductorSpec,
    amb: &AmbientConditions,
    t_s: f64,
) -> ConvectiveCooling {
    let t_a = amb.air_temp;
    if t_s <= t_a {
        return ConvectiveCooling {
            power: 0.0,
            nusselt: 0.0,
        };
    }
    let t_f = air::film_temperature(t_s, t_a);
    let forced = air::forced_nusselt(
        amb.wind_speed,
        amb.wind_angle_deg,
        spec.diameter_m,
        spec.surface_roughness,
        t_f,
    );
    let natural = air::natural_nusselt(spec.diameter_m, t_s, t_a);
    let nusselt = forced.max(natural);
    ConvectiveCooling {
        power: PI * air::thermal_conductivity(t_f) * (t_s - t_a) * nusselt,
        nusselt,
    }
}

/// Radiative exchange with the surroundings. Negative when `t_s < t_a`.
pub fn radiative_cooling(spec: &ConductorSpec, t_s: f64, t_a: f64) -> f64 {
    let ts = t_s + air::KELVIN_OFFSET;
    let ta = t_a + air::KELVIN_OFFSET;
    PI * spec.diameter_m * spec.emissivity * air::STEFAN_BOLTZMANN * (ts.powi(4) - ta.powi(4))
}

pub fn heat_balance(
    spec: &ConductorSpec,
    amb: &AmbientConditions,
    i_dc: f64,
    t_av: f64,
) -> HeatBalanceTerms {
    HeatBalanceTerms {
        p_joule: joule_heating(spec, i_dc, t_av),
        p_solar: solar_heating(spec, amb),
        p_conv: convective_cooling(spec, amb, t_av).power,
        p_rad: radiative_cooling(spec, t_av, amb.air_temp),
    }
}

/// DC current that holds the conductor at `spec.t_max`.
pub fn dc_rating(spec: &ConductorSpec, amb: &AmbientConditions) -> Result<f64, ThermalError> {
    let t = spec.t_max;
    let headroom = convective_cooling(spec, amb, t).power + radiative_cooling(spec, t, amb.air_temp)
        - solar_heating(spec, amb);
    if headroom < 0.0 {
        return Err(ThermalError::NegativeHeadroom { deficit: -headroom });
    }
    Ok((headroom / spec.resistance_at(t)).sqrt())
}

/// Equivalent AC rating of a steel-cored conductor carrying `i_dc`.
pub fn ac_rating(i_dc: f64) -> f64 {
    i_dc / (1.0123 + 2.319e-5 * i_dc).sqrt()
}

/// DC and AC ampacity at the given ambient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ampacity {
    pub dc: f64,
    pub ac: f64,
    /// Set when solar heating alone exceeds the available cooling; both
    /// currents are then reported as 0 A.
    pub headroom_exhausted: bool,
}

pub fn ampacity(spec: &ConductorSpec, amb: &AmbientConditions) -> Ampacity {
    match dc_rating(spec, amb) {
        Ok(dc) => Ampacity {
            dc,
            ac: ac_rating(dc),
            headroom_exhausted: false,
        },
        Err(e) => {
            log::warn!("{e}; rating set to 0 A for {amb:?}");
            Ampacity {
                dc: 0.0,
                ac: 0.0,
                headroom_exhausted: true,
            }
        }
    }
}
