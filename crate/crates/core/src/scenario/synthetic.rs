//! Seeded synthetic winter month for the six-zone benchmark.
//!
//! Wind follows a shared synoptic Ornstein-Uhlenbeck process that reaches the
//! eastern zones a few hours after the western ones, mapped through a cubic
//! power curve. Installed wind is concentrated in the north (A, E), PV in the
//! south. Loads follow a daily profile with weekend and holiday dips.

use super::io::TimeSeriesTable;
use chrono::{DateTime, Datelike, Duration, NaiveDate, TimeZone, Timelike, Utc, Weekday};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

pub const DEMO_SEED: u64 = 2011;
pub const STEP_SECONDS: i64 = 900;

struct ZoneProfile {
    id: &'static str,
    wind_mw: f64,
    pv_mw: f64,
    mean_load_mw: f64,
    mean_wind_speed: f64,
    /// Hours the synoptic signal lags zone A.
    lag_hours: f64,
    t_min: f64,
    t_max: f64,
}

const ZONES: [ZoneProfile; 6] = [
    ZoneProfile { id: "A", wind_mw: 10_500.0, pv_mw: 2_500.0, mean_load_mw: 8_000.0, mean_wind_speed: 8.2, lag_hours: 0.0, t_min: 1.0, t_max: 5.0 },
    ZoneProfile { id: "B", wind_mw: 4_500.0, pv_mw: 3_500.0, mean_load_mw: 15_500.0, mean_wind_speed: 6.4, lag_hours: 1.0, t_min: 1.5, t_max: 6.0 },
    ZoneProfile { id: "C", wind_mw: 500.0, pv_mw: 4_500.0, mean_load_mw: 12_500.0, mean_wind_speed: 4.8, lag_hours: 4.0, t_min: -1.0, t_max: 4.5 },
    ZoneProfile { id: "D", wind_mw: 700.0, pv_mw: 8_000.0, mean_load_mw: 9_500.0, mean_wind_speed: 4.6, lag_hours: 6.0, t_min: -3.0, t_max: 3.0 },
    ZoneProfile { id: "E", wind_mw: 12_000.0, pv_mw: 3_500.0, mean_load_mw: 9_500.0, mean_wind_speed: 7.6, lag_hours: 3.0, t_min: -0.5, t_max: 4.0 },
    ZoneProfile { id: "F", wind_mw: 800.0, pv_mw: 1_500.0, mean_load_mw: 5_800.0, mean_wind_speed: 5.2, lag_hours: 2.0, t_min: 0.0, t_max: 5.0 },
];

/// Five input tables of the demo scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct DemoData {
    pub wind: TimeSeriesTable,
    pub pv: TimeSeriesTable,
    pub load: TimeSeriesTable,
    pub tmin: TimeSeriesTable,
    pub tmax: TimeSeriesTable,
}

impl DemoData {
    pub fn write(&self, dir: &std::path::Path) -> Result<(), super::ScenarioError> {
        std::fs::create_dir_all(dir).map_err(|e| super::ScenarioError::Io {
            path: dir.display().to_string(),
            message: e.to_string(),
        })?;
        self.wind.write_csv(&dir.join("wind.csv"))?;
        self.pv.write_csv(&dir.join("pv.csv"))?;
        self.load.write_csv(&dir.join("load.csv"))?;
        self.tmin.write_csv(&dir.join("tmin.csv"))?;
        self.tmax.write_csv(&dir.join("tmax.csv"))
    }
}

pub fn zone_ids() -> Vec<String> {
    ZONES.iter().map(|z| z.id.to_string()).collect()
}

fn round1(v: f64) -> f64 {
    (v * 10.0).round() / 10.0
}

/// Wind turbine power curve, per unit of installed capacity.
fn power_curve(v: f64) -> f64 {
    const CUT_IN: f64 = 3.0;
    const RATED: f64 = 12.5;
    const CUT_OUT: f64 = 25.0;
    if v < CUT_IN || v >= CUT_OUT {
        0.0
    } else if v >= RATED {
        1.0
    } else {
        ((v - CUT_IN) / (RATED - CUT_IN)).powi(3)
    }
}

/// Clear-sky PV output per unit at local hour `h` in December.
fn pv_shape(h: f64) -> f64 {
    const SUNRISE: f64 = 8.2;
    const SUNSET: f64 = 16.3;
    if h <= SUNRISE || h >= SUNSET {
        0.0
    } else {
        0.30 * (std::f64::consts::PI * (h - SUNRISE) / (SUNSET - SUNRISE)).sin().powf(1.5)
    }
}

/// Daily load shape at local hour `h`, mean close to 1.
fn load_shape(h: f64) -> f64 {
    let morning = (-(h - 11.0).powi(2) / 18.0).exp();
    let evening = (-(h - 17.5).powi(2) / 4.0).exp();
    let night = (-(h - 3.5).powi(2) / 8.0).exp();
    0.93 + 0.14 * morning + 0.16 * evening - 0.17 * night
}

fn is_holiday(d: NaiveDate) -> bool {
    d.month() == 12 && matches!(d.day(), 24..=26 | 31)
}

/// December 2011 at 15-minute resolution with daily temperature records for
/// every local date the series touch.
pub fn generate(seed: u64) -> DemoData {
    let start = Utc.with_ymd_and_hms(2011, 12, 1, 0, 0, 0).unwrap();
    generate_span(seed, start, 31 * 96)
}

pub fn generate_span(seed: u64, start: DateTime<Utc>, steps: usize) -> DemoData {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, 1.0).unwrap();
    let hours = steps as f64 / 4.0;
    let max_lag = ZONES.iter().map(|z| z.lag_hours).fold(0.0, f64::max);

    // synoptic signal on an hourly grid, long enough to cover every lag
    let n_hours = (hours + max_lag).ceil() as usize + 2;
    let tau = 36.0; // hours
    let a = (-1.0f64 / tau).exp();
    let mut synoptic = Vec::with_capacity(n_hours);
    let mut x = 1.0;
    for _ in 0..n_hours {
        x = a * x + (1.0 - a * a).sqrt() * normal.sample(&mut rng);
        synoptic.push(x);
    }
    let sample = |t_hours: f64| {
        let i = t_hours.floor().max(0.0) as usize;
        let f = t_hours - i as f64;
        let j = (i + 1).min(synoptic.len() - 1);
        synoptic[i.min(synoptic.len() - 1)] * (1.0 - f) + synoptic[j] * f
    };

    let timestamps: Vec<DateTime<Utc>> = (0..steps)
        .map(|k| start + Duration::seconds(STEP_SECONDS * k as i64))
        .collect();
    let local_hour = |t: &DateTime<Utc>| {
        let l = *t + Duration::hours(1);
        (l.hour() as f64 + l.minute() as f64 / 60.0, l.date_naive())
    };

    let first_day = local_hour(&timestamps[0]).1;
    let last_day = local_hour(&timestamps[steps - 1]).1;
    let n_days = (last_day - first_day).num_days() as usize + 1;
    let clearness: Vec<f64> = (0..n_days)
        .map(|_| (0.45 + 0.35 * normal.sample(&mut rng)).clamp(0.05, 1.0))
        .collect();
    let day_anomaly: Vec<f64> = {
        let mut v = Vec::with_capacity(n_days);
        let mut y = 0.0;
        for _ in 0..n_days {
            y = 0.7 * y + 1.5 * normal.sample(&mut rng);
            v.push(y);
        }
        v
    };

    let mut wind = vec![Vec::with_capacity(steps); ZONES.len()];
    let mut pv = vec![Vec::with_capacity(steps); ZONES.len()];
    let mut load = vec![Vec::with_capacity(steps); ZONES.len()];
    let mut noise = vec![0.0; ZONES.len()];
    for (k, t) in timestamps.iter().enumerate() {
        let th = k as f64 / 4.0;
        let (h, date) = local_hour(t);
        let day = (date - first_day).num_days() as usize;
        let weekday_factor = match date.weekday() {
            Weekday::Sat => 0.90,
            Weekday::Sun => 0.84,
            _ => 1.0,
        };
        let holiday_factor = if is_holiday(date) { 0.85 } else { 1.0 };
        for (z, p) in ZONES.iter().enumerate() {
            noise[z] = 0.9 * noise[z] + 0.1 * normal.sample(&mut rng);
            let s = sample(th + max_lag - p.lag_hours);
            let v = (p.mean_wind_speed * (1.0 + 0.45 * s) + 0.6 * noise[z]).max(0.0);
            wind[z].push(round1(p.wind_mw * power_curve(v)));
            let cloud = (clearness[day] * (1.0 + 0.15 * noise[z])).clamp(0.0, 1.0);
            pv[z].push(round1(p.pv_mw * pv_shape(h) * cloud));
            let l = p.mean_load_mw * load_shape(h) * weekday_factor * holiday_factor * (1.0 + 0.01 * noise[z]);
            load[z].push(round1(l));
        }
    }

    let days: Vec<DateTime<Utc>> = (0..n_days)
        .map(|d| {
            (first_day + Duration::days(d as i64))
                .and_hms_opt(0, 0, 0)
                .unwrap()
                .and_utc()
        })
        .collect();
    let mut tmin = vec![Vec::with_capacity(n_days); ZONES.len()];
    let mut tmax = vec![Vec::with_capacity(n_days); ZONES.len()];
    for d in 0..n_days {
        for (z, p) in ZONES.iter().enumerate() {
            let local = 0.8 * normal.sample(&mut rng);
            let lo = p.t_min + day_anomaly[d] + local;
            let span = (p.t_max - p.t_min + 1.2 * normal.sample(&mut rng)).max(1.0);
            tmin[z].push(round1(lo));
            tmax[z].push(round1(lo + span));
        }
    }

    let table = |timestamps: Vec<DateTime<Utc>>, values, step| TimeSeriesTable {
        timestamps,
        columns: zone_ids(),
        values,
        step_seconds: step,
    };
    DemoData {
        wind: table(timestamps.clone(), wind, STEP_SECONDS),
        pv: table(timestamps.clone(), pv, STEP_SECONDS),
        load: table(timestamps, load, STEP_SECONDS),
        tmin: table(days.clone(), tmin, 86_400),
        tmax: table(days, tmax, 86_400),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_data() {
        let a = generate_span(7, Utc.with_ymd_and_hms(2011, 12, 1, 0, 0, 0).unwrap(), 400);
        let b = generate_span(7, Utc.with_ymd_and_hms(2011, 12, 1, 0, 0, 0).unwrap(), 400);
        assert_eq!(a, b);
        let c = generate_span(8, Utc.with_ymd_and_hms(2011, 12, 1, 0, 0, 0).unwrap(), 400);
        assert_ne!(a.wind, c.wind);
    }

    #[test]
    fn month_shape() {
        let d = generate(DEMO_SEED);
        assert_eq!(d.wind.len(), 2976);
        // the last UTC step is already 1 January in local time
        assert_eq!(d.tmin.len(), 32);
        for z in 0..6 {
            assert!(d.tmin.values[z].iter().zip(&d.tmax.values[z]).all(|(lo, hi)| lo <= hi));
            assert!(d.wind.values[z].iter().all(|&v| v >= 0.0));
            assert!(d.pv.values[z].iter().all(|&v| v >= 0.0));
        }
        // wind-heavy north
        let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
        assert!(mean(&d.wind.values[0]) > 5.0 * mean(&d.wind.values[2]));
        assert!(mean(&d.wind.values[4]) > 5.0 * mean(&d.wind.values[3]));
    }

    #[test]
    fn power_curve_shape() {
        assert_eq!(power_curve(2.0), 0.0);
        assert_eq!(power_curve(13.0), 1.0);
        assert_eq!(power_curve(30.0), 0.0);
        assert!(power_curve(8.0) > power_curve(6.0));
    }
}
