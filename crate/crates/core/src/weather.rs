//! Per-zone weather reconstructed from RES feed-in and daily temperature
//! records.
//!
//! - wind speed from wind feed-in through a cubic power curve between cut-in
//!   and rated speed, `V = (P / C_W)^(1/3) + V_cut` with
//!   `C_W = P_max / (V_rated - V_cut)^3`;
//! - global radiation proportional to PV feed-in, scaled so the mean feed-in
//!   maps to the regional mean radiation;
//! - air temperature between the day's minimum and maximum following a
//!   diurnal shape `Γ(t) ∈ [0, 1]` that is 0 at the seasonal valley hour and
//!   1 at the seasonal peak hour.
//!
//! The inverse power curve maps the series maximum to rated speed through
//! `(V_rated - V_cut)^3` yet adds `V_cut` back afterwards. This is not the
//! physical turbine curve; it is kept as-is so reconstructed speeds span
//! exactly `[V_cut, V_rated]`.

use crate::thermal::AmbientConditions;
use chrono::{DateTime, Datelike, Duration, FixedOffset, NaiveDate, Timelike, Utc};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

pub const DEFAULT_V_RATED: f64 = 15.0;
pub const DEFAULT_V_CUT: f64 = 1.0;
pub const DEFAULT_WIND_ANGLE: f64 = 45.0;
pub const DEFAULT_STEP_SECONDS: i64 = 900;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WeatherError {
    #[error("feed-in series for zone {zone} has no positive value")]
    AllZeroSeries { zone: String },
    #[error("series lengths differ: {0}")]
    HorizonMismatch(String),
    #[error("invalid feed-in series for zone {zone}: {reason}")]
    InvalidSeries { zone: String, reason: String },
    #[error("invalid temperature record for {date}: t_min {t_min} > t_max {t_max}")]
    InvalidRecord { date: NaiveDate, t_min: f64, t_max: f64 },
    #[error("no daily temperature record for {0}")]
    MissingTemperatureRecord(NaiveDate),
    #[error("invalid calibration: {0}")]
    InvalidCalibration(String),
}

/// One feed-in (or load) series of a zone at a uniform step, MW.
#[derive(Debug, Clone, PartialEq)]
pub struct FeedInSeries {
    pub zone: String,
    pub step_seconds: i64,
    pub values: Vec<f64>,
}

impl FeedInSeries {
    pub fn new(zone: impl Into<String>, step_seconds: i64, values: Vec<f64>) -> Result<Self, WeatherError> {
        let zone = zone.into();
        if step_seconds <= 0 {
            return Err(WeatherError::InvalidSeries {
                zone,
                reason: format!("step {step_seconds} s"),
            });
        }
        if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| !(**v >= 0.0) || !v.is_finite()) {
            return Err(WeatherError::InvalidSeries {
                zone,
                reason: format!("value {v} at step {i}"),
            });
        }
        Ok(Self {
            zone,
            step_seconds,
            values,
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    pub fn mean(&self) -> f64 {
        if self.values.is_empty() {
            0.0
        } else {
            self.values.iter().sum::<f64>() / self.values.len() as f64
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Season {
    Winter,
    Spring,
    Summer,
    Autumn,
}

impl Season {
    /// Meteorological seasons.
    pub fn of_month(month: u32) -> Season {
        match month {
            12 | 1 | 2 => Season::Winter,
            3..=5 => Season::Spring,
            6..=8 => Season::Summer,
            _ => Season::Autumn,
        }
    }

    pub fn of_date(date: NaiveDate) -> Season {
        Season::of_month(date.month())
    }

    /// Local hours of the daily temperature minimum and maximum.
    pub fn valley_peak_hours(self) -> (f64, f64) {
        match self {
            Season::Summer => (4.0, 18.0),
            Season::Winter => (8.0, 14.0),
            Season::Spring | Season::Autumn => (6.0, 16.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DailyTempRecord {
    /// Local calendar date.
    pub date: NaiveDate,
    pub t_min: f64,
    pub t_max: f64,
}

impl DailyTempRecord {
    pub fn new(date: NaiveDate, t_min: f64, t_max: f64) -> Result<Self, WeatherError> {
        if !(t_min <= t_max) {
            return Err(WeatherError::InvalidRecord { date, t_min, t_max });
        }
        Ok(Self { date, t_min, t_max })
    }

    pub fn season(&self) -> Season {
        Season::of_date(self.date)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WindCalibration {
    pub v_rated: f64,
    pub v_cut: f64,
    /// MW / (m/s)³
    pub c_w: f64,
    /// Feed-in mapped to rated speed, MW.
    pub p_max: f64,
}

pub fn calibrate_wind(series: &FeedInSeries) -> Result<WindCalibration, WeatherError> {
    calibrate_wind_with(series, DEFAULT_V_RATED, DEFAULT_V_CUT)
}

pub fn calibrate_wind_with(
    series: &FeedInSeries,
    v_rated: f64,
    v_cut: f64,
) -> Result<WindCalibration, WeatherError> {
    if !(v_rated > v_cut && v_cut >= 0.0) {
        return Err(WeatherError::InvalidCalibration(format!(
            "need v_rated > v_cut >= 0, got {v_rated} and {v_cut}"
        )));
    }
    let p_max = series.max();
    if !(p_max > 0.0) {
        return Err(WeatherError::AllZeroSeries {
            zone: series.zone.clone(),
        });
    }
    Ok(WindCalibration {
        v_rated,
        v_cut,
        c_w: p_max / (v_rated - v_cut).powi(3),
        p_max,
    })
}

/// Wind speed (m/s) behind a wind feed-in of `p_w` MW. Feed-in above the
/// calibration maximum is clamped to rated speed.
pub fn wind_speed(p_w: f64, cal: &WindCalibration) -> f64 {
    let p = if p_w > cal.p_max {
        log::debug!("wind feed-in {p_w} MW above calibration max {} MW, clamped", cal.p_max);
        cal.p_max
    } else {
        p_w.max(0.0)
    };
    (p / cal.c_w).cbrt() + cal.v_cut
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolarCalibration {
    /// Regional mean global radiation, W/m².
    pub s_mean: f64,
    /// Mean PV feed-in, MW.
    pub p_pv_mean: f64,
}

impl SolarCalibration {
    pub fn new(s_mean: f64, p_pv_mean: f64) -> Result<Self, WeatherError> {
        if !(s_mean > 0.0 && p_pv_mean > 0.0) {
            return Err(WeatherError::InvalidCalibration(format!(
                "s_mean {s_mean} and p_pv_mean {p_pv_mean} must be positive"
            )));
        }
        Ok(Self { s_mean, p_pv_mean })
    }

    pub fn from_series(s_mean: f64, series: &FeedInSeries) -> Result<Self, WeatherError> {
        let mean = series.mean();
        if !(mean > 0.0) {
            return Err(WeatherError::AllZeroSeries {
                zone: series.zone.clone(),
            });
        }
        Self::new(s_mean, mean)
    }
}

pub fn solar_radiation(p_pv: f64, cal: &SolarCalibration) -> f64 {
    cal.s_mean / cal.p_pv_mean * p_pv.max(0.0)
}

/// Diurnal temperature shape `Γ` at local hour `hour` (0 ≤ hour < 24).
///
/// Half-cosine rise from the valley to the peak hour, half-cosine fall from
/// the peak to the next day's valley hour. Continuous across midnight.
pub fn diurnal_shape(hour: f64, season: Season) -> f64 {
    let (valley, peak) = season.valley_peak_hours();
    let h = hour.rem_euclid(24.0);
    if h >= valley && h <= peak {
        0.5 * (1.0 - (PI * (h - valley) / (peak - valley)).cos())
    } else {
        // time since the most recent peak
        let since_peak = if h > peak { h - peak } else { h + 24.0 - peak };
        let fall = valley + 24.0 - peak;
        0.5 * (1.0 + (PI * since_peak / fall).cos())
    }
}

pub fn air_temperature(record: &DailyTempRecord, hour: f64, season: Season) -> f64 {
    let t = record.t_min + (record.t_max - record.t_min) * diurnal_shape(hour, season);
    t.clamp(record.t_min, record.t_max)
}

/// Fixed settings of the reconstruction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReconstructionSettings {
    pub wind_angle_deg: f64,
    /// Offset from UTC of the local time used for season and time of day.
    pub utc_offset_hours: i32,
}

impl Default for ReconstructionSettings {
    fn default() -> Self {
        Self {
            wind_angle_deg: DEFAULT_WIND_ANGLE,
            utc_offset_hours: 1,
        }
    }
}

/// Everything needed to rebuild the weather of one zone.
#[derive(Debug, Clone)]
pub struct ZoneWeatherInputs<'a> {
    /// UTC timestamp of the first step.
    pub start: DateTime<Utc>,
    pub wind: &'a FeedInSeries,
    pub pv: &'a FeedInSeries,
    pub wind_calibration: WindCalibration,
    pub solar_calibration: SolarCalibration,
    /// Daily records covering every local date of the horizon.
    pub daily: &'a [DailyTempRecord],
}

pub fn reconstruct_zone(
    inputs: &ZoneWeatherInputs<'_>,
    settings: &ReconstructionSettings,
) -> Result<Vec<AmbientConditions>, WeatherError> {
    let wind = inputs.wind;
    let pv = inputs.pv;
    if wind.len() != pv.len() {
        return Err(WeatherError::HorizonMismatch(format!(
            "zone {}: wind has {} steps, PV has {}",
            wind.zone,
            wind.len(),
            pv.len()
        )));
    }
    if wind.step_seconds != pv.step_seconds {
        return Err(WeatherError::HorizonMismatch(format!(
            "zone {}: wind step {} s, PV step {} s",
            wind.zone, wind.step_seconds, pv.step_seconds
        )));
    }
    let offset = FixedOffset::east_opt(settings.utc_offset_hours * 3600).ok_or_else(|| {
        WeatherError::InvalidCalibration(format!("utc offset {} h", settings.utc_offset_hours))
    })?;

    let mut clamped = 0usize;
    let mut out = Vec::with_capacity(wind.len());
    let mut day_cursor = 0usize;
    for (k, (&p_w, &p_pv)) in wind.values.iter().zip(&pv.values).enumerate() {
        let t = inputs.start + Duration::seconds(wind.step_seconds * k as i64);
        let local = t.with_timezone(&offset);
        let date = local.date_naive();
        let record = find_record(inputs.daily, date, &mut day_cursor)
            .ok_or(WeatherError::MissingTemperatureRecord(date))?;
        let hour = local.hour() as f64 + local.minute() as f64 / 60.0 + local.second() as f64 / 3600.0;
        if p_w > inputs.wind_calibration.p_max {
            clamped += 1;
        }
        out.push(AmbientConditions {
            wind_speed: wind_speed(p_w, &inputs.wind_calibration),
            wind_angle_deg: settings.wind_angle_deg,
            solar_radiation: solar_radiation(p_pv, &inputs.solar_calibration),
            air_temp: air_temperature(record, hour, record.season()),
        });
    }
    if clamped > 0 {
        log::warn!(
            "zone {}: {clamped} steps of wind feed-in above the calibration maximum were clamped to rated speed",
            wind.zone
        );
    }
    Ok(out)
}

fn find_record<'a>(
    daily: &'a [DailyTempRecord],
    date: NaiveDate,
    cursor: &mut usize,
) -> Option<&'a DailyTempRecord> {
    if let Some(r) = daily.get(*cursor).filter(|r| r.date == date) {
        return Some(r);
    }
    let i = daily.iter().position(|r| r.date == date)?;
    *cursor = i;
    Some(&daily[i])
}
