use super::{DispatchResult, PowerNodeFleet};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZoneCurtailment {
    pub zone: String,
    /// Shed energy as a percentage of load energy.
    pub load_pct: f64,
    pub wind_pct: f64,
    pub pv_pct: f64,
    pub load_mwh: f64,
    pub shed_mwh: f64,
    pub wind_mwh: f64,
    pub wind_curtailed_mwh: f64,
    pub pv_mwh: f64,
    pub pv_curtailed_mwh: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurtailmentReport {
    pub zones: Vec<ZoneCurtailment>,
    pub total: ZoneCurtailment,
}

impl CurtailmentReport {
    /// Aggregate over a subset of zones.
    pub fn aggregate(&self, zones: &[&str]) -> ZoneCurtailment {
        let rows: Vec<&ZoneCurtailment> = self.zones.iter().filter(|z| zones.contains(&z.zone.as_str())).collect();
        sum_rows(zones.join("+"), &rows)
    }
}

fn pct(part: f64, whole: f64) -> f64 {
    if whole > 0.0 {
        100.0 * part / whole
    } else {
        0.0
    }
}

fn sum_rows(name: String, rows: &[&ZoneCurtailment]) -> ZoneCurtailment {
    let s = |f: fn(&ZoneCurtailment) -> f64| rows.iter().map(|r| f(r)).sum::<f64>();
    let (load, shed) = (s(|r| r.load_mwh), s(|r| r.shed_mwh));
    let (wind, wc) = (s(|r| r.wind_mwh), s(|r| r.wind_curtailed_mwh));
    let (pv, pc) = (s(|r| r.pv_mwh), s(|r| r.pv_curtailed_mwh));
    ZoneCurtailment {
        zone: name,
        load_pct: pct(shed, load),
        wind_pct: pct(wc, wind),
        pv_pct: pct(pc, pv),
        load_mwh: load,
        shed_mwh: shed,
        wind_mwh: wind,
        wind_curtailed_mwh: wc,
        pv_mwh: pv,
        pv_curtailed_mwh: pc,
    }
}

/// Per-zone curtailment and shedding as percentages of the energy available
/// over the simulated steps, plus a `TOTAL` row.
pub fn curtailment_report(result: &DispatchResult, fleet: &PowerNodeFleet, step_hours: f64) -> CurtailmentReport {
    let zones: Vec<ZoneCurtailment> = fleet
        .zones
        .iter()
        .enumerate()
        .map(|(z, zone)| {
            let (mut load, mut shed, mut wind, mut wc, mut pv, mut pc) = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
            for s in &result.steps {
                load += zone.load[s.step] * step_hours;
                shed += s.shed[z] * step_hours;
                wind += zone.wind[s.step] * step_hours;
                wc += s.wind_curtailed[z] * step_hours;
                pv += zone.pv[s.step] * step_hours;
                pc += s.pv_curtailed[z] * step_hours;
            }
            ZoneCurtailment {
                zone: zone.id.clone(),
                load_pct: pct(shed, load),
                wind_pct: pct(wc, wind),
                pv_pct: pct(pc, pv),
                load_mwh: load,
                shed_mwh: shed,
                wind_mwh: wind,
                wind_curtailed_mwh: wc,
                pv_mwh: pv,
                pv_curtailed_mwh: pc,
            }
        })
        .collect();
    let refs: Vec<&ZoneCurtailment> = zones.iter().collect();
    let total = sum_rows("TOTAL".into(), &refs);
    CurtailmentReport { zones, total }
}
