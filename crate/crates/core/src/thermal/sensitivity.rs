//! Rating sweeps over one ambient parameter and first-order fits of them.

use super::{ampacity, AmbientConditions, ConductorSpec, ThermalError};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    AirTemp,
    WindSpeed,
    WindAngle,
    Solar,
}

impl SweepParameter {
    pub const ALL: [SweepParameter; 4] = [
        SweepParameter::WindSpeed,
        SweepParameter::WindAngle,
        SweepParameter::AirTemp,
        SweepParameter::Solar,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SweepParameter::AirTemp => "air_temp",
            SweepParameter::WindSpeed => "wind_speed",
            SweepParameter::WindAngle => "wind_angle",
            SweepParameter::Solar => "solar",
        }
    }

    /// Range over which sweeps and fits are supported.
    pub fn domain(self) -> (f64, f64) {
        match self {
            SweepParameter::AirTemp => (-20.0, 40.0),
            SweepParameter::WindSpeed => (0.0, 25.0),
            SweepParameter::WindAngle => (0.0, 90.0),
            SweepParameter::Solar => (0.0, 1000.0),
        }
    }
}

impl fmt::Display for SweepParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownParameter(pub String);

impl fmt::Display for UnknownParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "unknown sweep parameter '{}' (expected wind_speed, wind_angle, air_temp or solar)",
            self.0
        )
    }
}

impl std::error::Error for UnknownParameter {}

impl FromStr for SweepParameter {
    type Err = UnknownParameter;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "air_temp" | "temperature" => Ok(SweepParameter::AirTemp),
            "wind_speed" | "wind" => Ok(SweepParameter::WindSpeed),
            "wind_angle" | "angle" => Ok(SweepParameter::WindAngle),
            "solar" | "solar_radiation" => Ok(SweepParameter::Solar),
            other => Err(UnknownParameter(other.to_string())),
        }
    }
}

/// Ambient around which the sweeps are taken: 5 m/s wind at 45°, full sun,
/// 20 °C air. At zero wind this gives the Zebra conductor roughly 700 A.
pub fn reference_ambient() -> AmbientConditions {
    AmbientConditions {
        wind_speed: 5.0,
        wind_angle_deg: 45.0,
        solar_radiation: 1000.0,
        air_temp: 20.0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub value: f64,
    pub dc: f64,
    pub ac: f64,
    pub headroom_exhausted: bool,
}

pub fn sweep(
    spec: &ConductorSpec,
    base: &AmbientConditions,
    parameter: SweepParameter,
    values: &[f64],
) -> Vec<SweepPoint> {
    values
        .iter()
        .map(|&value| {
            let amp = ampacity(spec, &base.with(parameter, value));
            SweepPoint {
                value,
                dc: amp.dc,
                ac: amp.ac,
                headroom_exhausted: amp.headroom_exhausted,
            }
        })
        .collect()
}

pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![lo],
        _ => (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

/// First-order least-squares fit of AC rating against one ambient parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct SensitivityFit {
    pub parameter: SweepParameter,
    pub range: (f64, f64),
    /// A per unit of the parameter.
    pub slope: f64,
    pub intercept: f64,
    /// Rating at the lower end of the range, the base for all percentages.
    pub base_rating: f64,
    /// Percent rating change per unit of the parameter.
    pub percent_per_unit: f64,
    /// Percent rating change per 1 % of the swept range.
    pub percent_per_percent: f64,
    /// Rating change from the lower to the upper end, percent.
    pub end_to_end_percent: f64,
    pub points: Vec<SweepPoint>,
}

pub fn sensitivity_fit(
    spec: &ConductorSpec,
    base: &AmbientConditions,
    parameter: SweepParameter,
    range: (f64, f64),
    n_points: usize,
) -> Result<SensitivityFit, ThermalError> {
    if n_points < 3 {
        return Err(ThermalError::DegenerateRange(n_points));
    }
    let (lo, hi) = range;
    let (dlo, dhi) = parameter.domain();
    if !(lo < hi) || lo < dlo - 1e-9 || hi > dhi + 1e-9 {
        return Err(ThermalError::OutOfDomain {
            parameter: parameter.name(),
            lo,
            hi,
        });
    }
    let points = sweep(spec, base, parameter, &linspace(lo, hi, n_points));
    let n = points.len() as f64;
    let mean_x = points.iter().map(|p| p.value).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.ac).sum::<f64>() / n;
    let (sxy, sxx) = points.iter().fold((0.0, 0.0), |(sxy, sxx), p| {
        let dx = p.value - mean_x;
        (sxy + dx * (p.ac - mean_y), sxx + dx * dx)
    });
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let base_rating = points[0].ac;
    let last = points[points.len() - 1].ac;
    let percent_per_unit = 100.0 * slope / base_rating;
    Ok(SensitivityFit {
        parameter,
        range,
        slope,
        intercept,
        base_rating,
        percent_per_unit,
        percent_per_percent: percent_per_unit * (hi - lo) / 100.0,
        end_to_end_percent: 100.0 * (last - base_rating) / base_rating,
        points,
    })
}
