//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use dlrsim::dispatch::{DispatchWeights, StorageUnit};
use dlrsim::grid::GridModel;

/// Line flows (MW) of a balanced injection vector from a direct nodal solve:
/// `B θ = P / base` with the first node's angle fixed at zero, solved by
/// Gauss-Jordan elimination with partial pivoting.
pub fn nodal_flows(model: &GridModel, injections_mw: &[f64]) -> Vec<f64> {
    let n = model.nodes().len();
    let base = model.base_mva();
    let mut b = vec![vec![0.0; n]; n];
    for l in model.lines() {
        b[l.from][l.from] += l.susceptance;
        b[l.to][l.to] += l.susceptance;
        b[l.from][l.to] -= l.susceptance;
        b[l.to][l.from] -= l.susceptance;
    }
    let m = n - 1;
    let mut a: Vec<Vec<f64>> = (1..n)
        .map(|i| {
            let mut row: Vec<f64> = (1..n).map(|j| b[i][j]).collect();
            row.push(injections_mw[i] / base);
            row
        })
        .collect();
    for c in 0..m {
        let p = (c..m)
            .max_by(|&x, &y| a[x][c].abs().total_cmp(&a[y][c].abs()))
            .unwrap();
        a.swap(c, p);
        let piv = a[c][c];
        assert!(piv.abs() > 1e-12, "singular network");
        for v in a[c].iter_mut() {
            *v /= piv;
        }
        for r in 0..m {
            if r != c {
                let f = a[r][c];
                if f != 0.0 {
                    for j in c..=m {
                        a[r][j] -= f * a[c][j];
                    }
                }
            }
        }
    }
    let mut theta = vec![0.0; n];
    for i in 1..n {
        theta[i] = a[i - 1][m];
    }
    model
        .lines()
        .iter()
        .map(|l| l.susceptance * (theta[l.from] - theta[l.to]) * base)
        .collect()
}

/// One zone of a brute-force dispatch instance.
#[derive(Debug, Clone)]
pub struct OracleZone {
    pub capacity: f64,
    pub res: Vec<f64>,
    pub load: Vec<f64>,
    pub storage: Option<StorageUnit>,
}

/// Small dispatch instance for exhaustive search. Ramp and quadratic
/// generation weights must be zero so that, for a fixed storage trajectory,
/// the steps decouple.
#[derive(Debug, Clone)]
pub struct OracleInstance {
    pub zones: Vec<OracleZone>,
    /// `ptdf[line][zone]`
    pub ptdf: Vec<Vec<f64>>,
    /// `limits[line][step]`
    pub limits: Vec<Vec<f64>>,
    pub weights: DispatchWeights,
    pub step_hours: f64,
    pub steps: usize,
}

/// Cheapest way for one zone to reach net decision injection `d`
/// (`g − curtailment + shed`), or `None` when out of reach.
fn zone_cost(z: &OracleZone, t: usize, d: f64, w: &DispatchWeights, h: f64, tol: f64) -> Option<f64> {
    if d >= 0.0 {
        if d > z.capacity + z.load[t] + tol {
            return None;
        }
        let g = d.min(z.capacity);
        let shed = (d - g).max(0.0);
        Some(h * (w.generation * g + w.shed * shed))
    } else {
        if -d > z.res[t] + tol {
            return None;
        }
        Some(h * w.curtailment * (-d))
    }
}

fn grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    (0..points)
        .map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64)
        .collect()
}

/// Storage trajectories: per step a net discharge on the grid, with the
/// state of charge it implies and its cost. Trajectories leaving [0, 1] are
/// dropped.
fn storage_paths(
    unit: &StorageUnit,
    steps: usize,
    points: usize,
    w: &DispatchWeights,
    h: f64,
) -> Vec<(Vec<f64>, f64)> {
    let levels = grid(-unit.charge_mw, unit.discharge_mw, points);
    let mut paths: Vec<(Vec<f64>, f64, f64)> = vec![(Vec::new(), unit.soc_init, 0.0)];
    for _ in 0..steps {
        let mut next = Vec::with_capacity(paths.len() * points);
        for (s, soc, cost) in &paths {
            for &net in &levels {
                let (ch, dis) = if net >= 0.0 { (0.0, net) } else { (-net, 0.0) };
                let soc1 = soc + h * (unit.eta_charge * ch - dis / unit.eta_discharge) / unit.energy_mwh;
                if !(-1e-12..=1.0 + 1e-12).contains(&soc1) {
                    continue;
                }
                let c = cost
                    + h * w.storage_throughput * (ch + dis)
                    + w.soc_tracking * (soc1 - w.soc_ref).powi(2);
                let mut s1 = s.clone();
                s1.push(net);
                next.push((s1, soc1, c));
            }
        }
        paths = next;
    }
    paths.into_iter().map(|(s, _, c)| (s, c)).collect()
}

/// Best objective over a discretised control space: `points` values per
/// free nodal injection and per storage net power, every other control set
/// optimally in closed form. Only feasible grid points count; `None` when no
/// grid point is feasible.
pub fn exhaustive_search(inst: &OracleInstance, points: usize) -> Option<f64> {
    let w = &inst.weights;
    let h = inst.step_hours;
    assert!(w.ramp == 0.0 && w.generation_quadratic == 0.0);
    assert!(inst.zones.iter().filter(|z| z.storage.is_some()).count() <= 1);

    let storage_zone = inst.zones.iter().position(|z| z.storage.is_some());
    let paths = match storage_zone {
        Some(z) => storage_paths(inst.zones[z].storage.as_ref().unwrap(), inst.steps, points, w, h),
        None => vec![(vec![0.0; inst.steps], 0.0)],
    };

    // per step and storage level, the best cost of the decoupled dispatch
    let mut best_total: Option<f64> = None;
    let mut memo: std::collections::HashMap<(usize, u64), Option<f64>> = std::collections::HashMap::new();
    for (path, storage_cost) in &paths {
        let mut total = *storage_cost;
        let mut feasible = true;
        for t in 0..inst.steps {
            let s = path[t];
            let key = (t, s.to_bits());
            let step_best = *memo.entry(key).or_insert_with(|| best_step(inst, t, storage_zone, s, points));
            match step_best {
                Some(c) => total += c,
                None => {
                    feasible = false;
                    break;
                }
            }
        }
        if feasible {
            best_total = Some(best_total.map_or(total, |b: f64| b.min(total)));
        }
    }
    best_total
}

fn best_step(inst: &OracleInstance, t: usize, storage_zone: Option<usize>, s: f64, points: usize) -> Option<f64> {
    let nz = inst.zones.len();
    let w = &inst.weights;
    let h = inst.step_hours;
    // injection p = res − load + d + s, with d ∈ [−res, cap + load]
    let ranges: Vec<(f64, f64)> = inst
        .zones
        .iter()
        .enumerate()
        .map(|(z, zone)| {
            let s_z = if Some(z) == storage_zone { s } else { 0.0 };
            let fixed = zone.res[t] - zone.load[t] + s_z;
            (fixed - zone.res[t], fixed + zone.capacity + zone.load[t])
        })
        .collect();
    let grids: Vec<Vec<f64>> = ranges[..nz - 1].iter().map(|&(lo, hi)| grid(lo, hi, points)).collect();
    let mut best: Option<f64> = None;
    let mut idx = vec![0usize; nz - 1];
    loop {
        let mut p: Vec<f64> = (0..nz - 1).map(|z| grids[z][idx[z]]).collect();
        p.push(-p.iter().sum::<f64>());
        if let Some(c) = evaluate(inst, t, storage_zone, s, &p, w, h) {
            best = Some(best.map_or(c, |b: f64| b.min(c)));
        }
        // odometer
        let mut k = 0;
        loop {
            if k == nz - 1 {
                return best;
            }
            idx[k] += 1;
            if idx[k] < points {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

fn evaluate(
    inst: &OracleInstance,
    t: usize,
    storage_zone: Option<usize>,
    s: f64,
    p: &[f64],
    w: &DispatchWeights,
    h: f64,
) -> Option<f64> {
    evaluate_tol(inst, t, storage_zone, s, p, w, h, 1e-9)
}

#[allow(clippy::too_many_arguments)]
fn evaluate_tol(
    inst: &OracleInstance,
    t: usize,
    storage_zone: Option<usize>,
    s: f64,
    p: &[f64],
    w: &DispatchWeights,
    h: f64,
    tol: f64,
) -> Option<f64> {
    for (line, row) in inst.ptdf.iter().enumerate() {
        let f: f64 = row.iter().zip(p).map(|(a, b)| a * b).sum();
        if f.abs() > inst.limits[line][t] + tol {
            return None;
        }
    }
    let mut cost = 0.0;
    for (z, zone) in inst.zones.iter().enumerate() {
        let s_z = if Some(z) == storage_zone { s } else { 0.0 };
        let d = p[z] - (zone.res[t] - zone.load[t]) - s_z;
        cost += zone_cost(zone, t, d, w, h, tol)?;
    }
    Some(cost)
}

/// A random small dispatch case: the instance for exhaustive search and the
/// matching QP objects.
pub struct OracleCase {
    pub instance: OracleInstance,
    pub model: GridModel,
    pub ptdf: dlrsim::grid::PtdfMatrix,
    pub fleet: dlrsim::dispatch::PowerNodeFleet,
    pub settings: dlrsim::dispatch::DispatchSettings,
}

pub fn random_case(seed: u64, nodes: usize, steps: usize, with_storage: bool) -> OracleCase {
    use dlrsim::dispatch::{DispatchSettings, PowerNodeFleet, ZoneFleet};
    use dlrsim::grid::{build_ptdf, Line, Node};
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);

    let node_list: Vec<Node> = (0..nodes)
        .map(|i| Node {
            id: format!("N{i}"),
            name: format!("node {i}"),
        })
        .collect();
    let mut lines = Vec::new();
    for i in 0..nodes {
        for j in i + 1..nodes {
            if nodes == 2 || rng.random_bool(0.8) || j == i + 1 {
                lines.push(Line {
                    from: i,
                    to: j,
                    circuits_220: 0,
                    circuits_380: 1,
                    susceptance: rng.random_range(2.0..20.0),
                    nlr_mva: 100.0,
                });
            }
        }
    }
    let model = GridModel::new(node_list, lines, 100.0).unwrap();
    let ptdf = build_ptdf(&model, 0).unwrap();
    let limits: Vec<Vec<f64>> = model
        .lines()
        .iter()
        .map(|_| (0..steps).map(|_| rng.random_range(20.0..120.0)).collect())
        .collect();

    let mut zones = Vec::new();
    let mut fleet_zones = Vec::new();
    for z in 0..nodes {
        let capacity = rng.random_range(0.0..150.0);
        let res: Vec<f64> = (0..steps).map(|_| rng.random_range(0.0..150.0)).collect();
        let load: Vec<f64> = (0..steps).map(|_| rng.random_range(10.0..150.0)).collect();
        let storage = (with_storage && z == 0).then(|| {
            StorageUnit::symmetric(rng.random_range(20.0..80.0), rng.random_range(10.0..60.0), 0.75, rng.random_range(0.2..0.8))
        });
        fleet_zones.push(ZoneFleet {
            id: format!("N{z}"),
            dispatchable_mw: capacity,
            storage,
            wind: res.clone(),
            pv: vec![0.0; steps],
            load: load.clone(),
        });
        zones.push(OracleZone {
            capacity,
            res,
            load,
            storage,
        });
    }
    let weights = DispatchWeights {
        ramp: 0.0,
        generation_quadratic: 0.0,
        ..DispatchWeights::default()
    };
    let settings = DispatchSettings {
        horizon: steps,
        step_hours: 0.25,
        weights,
        ramp_limit_mw: None,
    };
    let instance = OracleInstance {
        zones,
        ptdf: (0..ptdf.n_lines())
            .map(|l| (0..nodes).map(|z| ptdf.get(l, z)).collect())
            .collect(),
        limits,
        weights,
        step_hours: 0.25,
        steps,
    };
    OracleCase {
        instance,
        model,
        ptdf,
        fleet: PowerNodeFleet::new(fleet_zones).unwrap(),
        settings,
    }
}

/// Optimal first window of `case` from the QP: objective, injections
/// `[step][zone]` and net storage discharge `[step]` of zone 0.
pub fn qp_solution(case: &OracleCase) -> (f64, Vec<Vec<f64>>, Vec<f64>) {
    use dlrsim::dispatch::{build_qp, solve_qp, ControlKind, DispatchProblem, DispatchState};
    let problem = DispatchProblem {
        fleet: &case.fleet,
        ptdf: &case.ptdf,
        line_limits: &case.instance.limits,
        settings: &case.settings,
    };
    let qp = build_qp(&problem, 0, &DispatchState::initial(&case.fleet)).unwrap();
    let sol = solve_qp(&qp).unwrap();
    let nz = case.fleet.zones.len();
    let steps = case.instance.steps;
    let at = |l, z, k| qp.layout.get(l, z, k).map_or(0.0, |i| sol.x[i]);
    let p = (0..steps)
        .map(|l| (0..nz).map(|z| at(l, z, ControlKind::Injection)).collect())
        .collect();
    let s = (0..steps)
        .map(|l| at(l, 0, ControlKind::Discharge) - at(l, 0, ControlKind::Charge))
        .collect();
    (sol.objective, p, s)
}

pub fn qp_objective(case: &OracleCase) -> f64 {
    qp_solution(case).0
}

/// The search's cost model evaluated at an arbitrary (not discretised)
/// point, or `None` if the point is infeasible beyond `tol`.
pub fn oracle_cost(inst: &OracleInstance, p: &[Vec<f64>], storage_net: &[f64]) -> Option<f64> {
    let w = &inst.weights;
    let h = inst.step_hours;
    let storage_zone = inst.zones.iter().position(|z| z.storage.is_some());
    let mut total = 0.0;
    if let Some(z) = storage_zone {
        let unit = inst.zones[z].storage.as_ref().unwrap();
        let mut soc = unit.soc_init;
        for &net in storage_net {
            let (ch, dis) = if net >= 0.0 { (0.0, net) } else { (-net, 0.0) };
            soc += h * (unit.eta_charge * ch - dis / unit.eta_discharge) / unit.energy_mwh;
            total += h * w.storage_throughput * (ch + dis) + w.soc_tracking * (soc - w.soc_ref).powi(2);
        }
    }
    for t in 0..inst.steps {
        let s = if storage_zone.is_some() { storage_net[t] } else { 0.0 };
        total += evaluate_tol(inst, t, storage_zone, s, &p[t], w, h, 1e-4)?;
    }
    Some(total)
}
