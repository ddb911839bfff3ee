//! Rebuild one day of zone weather from the shipped demo feed-in and daily
//! temperature records, and show the Zebra rating it implies.
//!
//! ```text
//! cargo run --example weather_reconstruction -- [zone]
//! ```

use chrono::Duration;
use dlrsim::scenario::{load_inputs, Benchmark, ScenarioConfig};
use dlrsim::thermal::ampacity;
use dlrsim::weather::{
    calibrate_wind, reconstruct_zone, DailyTempRecord, FeedInSeries, ReconstructionSettings, SolarCalibration,
    ZoneWeatherInputs,
};
use std::path::PathBuf;

fn main() {
    let zone = std::env::args().nth(1).unwrap_or_else(|| "A".to_string());
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/demo/scenario.toml");
    let config = ScenarioConfig::load(&path).expect("demo scenario");
    let inputs = load_inputs(&config).expect("demo data");
    let bench: &Benchmark = &inputs.benchmark;
    let z = bench.zone_ids().iter().position(|id| *id == zone).expect("unknown zone");
    let spec = &bench.zones[z];

    let wind = FeedInSeries::new(&spec.id, 900, inputs.wind.values[z].clone()).unwrap();
    let pv = FeedInSeries::new(&spec.id, 900, inputs.pv.values[z].clone()).unwrap();
    let wind_cal = calibrate_wind(&wind).unwrap();
    let solar_cal = SolarCalibration::from_series(spec.s_mean_w_m2, &pv).unwrap();
    let daily: Vec<DailyTempRecord> = inputs
        .tmin
        .timestamps
        .iter()
        .enumerate()
        .map(|(r, t)| DailyTempRecord::new(t.date_naive(), inputs.tmin.values[z][r], inputs.tmax.values[z][r]).unwrap())
        .collect();
    let ambient = reconstruct_zone(
        &ZoneWeatherInputs {
            start: inputs.wind.timestamps[0],
            wind: &wind,
            pv: &pv,
            wind_calibration: wind_cal,
            solar_calibration: solar_cal,
            daily: &daily,
        },
        &ReconstructionSettings {
            wind_angle_deg: bench.wind_angle_deg,
            utc_offset_hours: bench.utc_offset_hours,
        },
    )
    .unwrap();

    println!(
        "zone {} ({}): c_w = {:.3} MW/(m/s)^3, S/P_pv = {:.5} W/m² per MW",
        spec.id, spec.name, wind_cal.c_w, solar_cal.s_mean / solar_cal.p_pv_mean
    );
    println!("{:<17} {:>8} {:>6} {:>7} {:>6} {:>7} {:>7}", "UTC", "P_w MW", "V m/s", "P_pv MW", "S W/m²", "T_a °C", "I_ac A");
    let day = 4;
    for k in (day * 96..(day + 1) * 96).step_by(4) {
        let a = &ambient[k];
        let t = inputs.wind.timestamps[0] + Duration::minutes(15 * k as i64);
        println!(
            "{:<17} {:>8.0} {:>6.2} {:>7.0} {:>6.1} {:>7.2} {:>7.0}",
            t.format("%Y-%m-%d %H:%M"),
            wind.values[k],
            a.wind_speed,
            pv.values[k],
            a.solar_radiation,
            a.air_temp,
            ampacity(&bench.conductor, a).ac
        );
    }
}
