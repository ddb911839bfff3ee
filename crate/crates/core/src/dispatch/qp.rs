use super::{DispatchError, DispatchProblem, DispatchState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ControlKind {
    Generation,
    WindCurtailment,
    PvCurtailment,
    Shed,
    Charge,
    Discharge,
    /// State of charge at the end of the step.
    Soc,
    /// Net nodal injection, fixed feed-in included.
    Injection,
}

impl ControlKind {
    fn offset(self) -> usize {
        match self {
            ControlKind::Generation => 0,
            ControlKind::WindCurtailment => 1,
            ControlKind::PvCurtailment => 2,
            ControlKind::Shed => 3,
            ControlKind::Charge => 4,
            ControlKind::Discharge => 5,
            ControlKind::Soc => 6,
            ControlKind::Injection => usize::MAX,
        }
    }
}

const PLAIN_VARS: usize = 4;
const STORAGE_VARS: usize = 7;

/// Position of every decision variable. Variables are grouped by step, then
/// by zone; storage zones carry three extra entries. Each step ends with one
/// injection per zone.
#[derive(Debug, Clone, PartialEq)]
pub struct VariableLayout {
    pub steps: usize,
    zone_offset: Vec<usize>,
    has_storage: Vec<bool>,
    injection_offset: usize,
    stride: usize,
}

impl VariableLayout {
    pub fn new(steps: usize, has_storage: Vec<bool>) -> Self {
        let mut zone_offset = Vec::with_capacity(has_storage.len());
        let mut stride = 0;
        for &s in &has_storage {
            zone_offset.push(stride);
            stride += if s { STORAGE_VARS } else { PLAIN_VARS };
        }
        let injection_offset = stride;
        stride += has_storage.len();
        Self {
            steps,
            zone_offset,
            has_storage,
            injection_offset,
            stride,
        }
    }

    pub fn n_vars(&self) -> usize {
        self.steps * self.stride
    }

    pub fn n_zones(&self) -> usize {
        self.zone_offset.len()
    }

    pub fn per_step(&self) -> usize {
        self.stride
    }

    pub fn has_storage(&self, zone: usize) -> bool {
        self.has_storage[zone]
    }

    /// Index of `kind` for `zone` at window step `l`, or `None` for storage
    /// quantities of a zone without storage.
    pub fn get(&self, l: usize, zone: usize, kind: ControlKind) -> Option<usize> {
        if kind == ControlKind::Injection {
            return Some(l * self.stride + self.injection_offset + zone);
        }
        let off = kind.offset();
        if off >= PLAIN_VARS && !self.has_storage[zone] {
            return None;
        }
        Some(l * self.stride + self.zone_offset[zone] + off)
    }

    pub fn idx(&self, l: usize, zone: usize, kind: ControlKind) -> usize {
        self.get(l, zone, kind)
            .unwrap_or_else(|| panic!("zone {zone} has no {kind:?} variable"))
    }
}

/// Sparse linear rows `a·x (=|≤) b`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SparseRows {
    pub rows: Vec<Vec<(usize, f64)>>,
    pub rhs: Vec<f64>,
}

impl SparseRows {
    pub fn push(&mut self, row: Vec<(usize, f64)>, rhs: f64) {
        self.rows.push(row);
        self.rhs.push(rhs);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn eval(&self, row: usize, x: &[f64]) -> f64 {
        self.rows[row].iter().map(|&(j, a)| a * x[j]).sum()
    }
}

/// `min ½xᵀPx + qᵀx + constant` subject to `eq`, `ineq` (≤) and box bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct QpInstance {
    pub n: usize,
    /// Upper-triangular entries `(i, j, v)` with `i ≤ j`; repeats add up.
    pub p: Vec<(usize, usize, f64)>,
    pub q: Vec<f64>,
    pub constant: f64,
    pub eq: SparseRows,
    pub ineq: SparseRows,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub layout: VariableLayout,
    /// The first `line_rows` inequality rows are the flow limits.
    pub line_rows: usize,
}

impl QpInstance {
    pub fn objective(&self, x: &[f64]) -> f64 {
        let quad: f64 = self
            .p
            .iter()
            .map(|&(i, j, v)| if i == j { 0.5 * v * x[i] * x[i] } else { v * x[i] * x[j] })
            .sum();
        let lin: f64 = self.q.iter().zip(x).map(|(q, x)| q * x).sum();
        quad + lin + self.constant
    }

    /// Largest violation of any constraint or bound.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..self.eq.len() {
            worst = worst.max((self.eq.eval(r, x) - self.eq.rhs[r]).abs());
        }
        for r in 0..self.ineq.len() {
            worst = worst.max(self.ineq.eval(r, x) - self.ineq.rhs[r]);
        }
        for (i, &v) in x.iter().enumerate() {
            worst = worst.max(self.lower[i] - v).max(v - self.upper[i]);
        }
        worst
    }

    /// Magnitude of the right-hand sides and bounds, the reference for
    /// feasibility tolerances.
    pub fn scale(&self) -> f64 {
        self.eq
            .rhs
            .iter()
            .chain(&self.ineq.rhs)
            .chain(&self.upper)
            .filter(|v| v.is_finite())
            .fold(1.0f64, |m, v| m.max(v.abs()))
    }

    fn add_square(&mut self, a: usize, b: Option<usize>, k: f64, c: f64) {
        // c·(x_a − x_b − k)²
        if c == 0.0 {
            return;
        }
        self.p.push((a, a, 2.0 * c));
        self.q[a] -= 2.0 * c * k;
        if let Some(b) = b {
            self.p.push((b, b, 2.0 * c));
            self.p.push((a.min(b), a.max(b), -2.0 * c));
            self.q[b] += 2.0 * c * k;
        }
        self.constant += c * k * k;
    }
}

/// Assemble the window starting at simulation step `k`. The window covers
/// `min(N, steps − k)` steps.
pub fn build_qp(
    problem: &DispatchProblem<'_>,
    k: usize,
    state: &DispatchState,
) -> Result<QpInstance, DispatchError> {
    use ControlKind::*;

    let fleet = problem.fleet;
    let settings = problem.settings;
    let w = &settings.weights;
    let h = settings.step_hours;
    let nz = fleet.zones.len();
    let total = fleet.steps();
    if settings.horizon == 0 {
        return Err(DispatchError::InfeasibleBounds("horizon of 0 steps".into()));
    }
    if k >= total {
        return Err(DispatchError::HorizonMismatch(format!("step {k} beyond {total} data steps")));
    }
    let steps = settings.horizon.min(total - k);
    let ptdf = problem.ptdf;
    if ptdf.n_nodes() != nz {
        return Err(DispatchError::HorizonMismatch(format!(
            "PTDF has {} nodes, fleet {nz} zones",
            ptdf.n_nodes()
        )));
    }
    let n_lines = ptdf.n_lines();
    if problem.line_limits.len() != n_lines {
        return Err(DispatchError::HorizonMismatch(format!(
            "{} limit series for {n_lines} lines",
            problem.line_limits.len()
        )));
    }
    if let Some(s) = problem.line_limits.iter().find(|s| s.len() < k + steps) {
        return Err(DispatchError::HorizonMismatch(format!(
            "line limits cover {} steps, window needs {}",
            s.len(),
            k + steps
        )));
    }
    if state.soc.len() != nz {
        return Err(DispatchError::InfeasibleBounds(format!("{} SoC values for {nz} zones", state.soc.len())));
    }
    if !(h > 0.0) {
        return Err(DispatchError::InfeasibleBounds(format!("step of {h} h")));
    }

    let layout = VariableLayout::new(steps, fleet.zones.iter().map(|z| z.storage.is_some()).collect());
    let n = layout.n_vars();
    let mut qp = QpInstance {
        n,
        p: Vec::new(),
        q: vec![0.0; n],
        constant: 0.0,
        eq: SparseRows::default(),
        ineq: SparseRows::default(),
        lower: vec![0.0; n],
        upper: vec![0.0; n],
        layout: layout.clone(),
        line_rows: 0,
    };

    // bounds and linear costs
    for l in 0..steps {
        let t = k + l;
        for (z, zone) in fleet.zones.iter().enumerate() {
            let mut set = |kind, hi: f64, cost: f64| {
                let i = layout.idx(l, z, kind);
                qp.upper[i] = hi;
                qp.q[i] += cost;
            };
            set(Generation, zone.dispatchable_mw, h * w.generation);
            set(WindCurtailment, zone.wind[t], h * w.curtailment);
            set(PvCurtailment, zone.pv[t], h * w.curtailment);
            set(Shed, zone.load[t], h * w.shed);
            if let Some(st) = &zone.storage {
                set(Charge, st.charge_mw, h * w.storage_throughput);
                set(Discharge, st.discharge_mw, h * w.storage_throughput);
                set(Soc, 1.0, 0.0);
            }
            let p = layout.idx(l, z, Injection);
            qp.lower[p] = f64::NEG_INFINITY;
            qp.upper[p] = f64::INFINITY;
        }
    }
    if let Some(i) = (0..n).find(|&i| !(qp.lower[i] <= qp.upper[i])) {
        return Err(DispatchError::InfeasibleBounds(format!(
            "variable {i}: [{}, {}]",
            qp.lower[i], qp.upper[i]
        )));
    }
    for (z, zone) in fleet.zones.iter().enumerate() {
        if zone.storage.is_some() && !(0.0..=1.0).contains(&state.soc[z]) {
            return Err(DispatchError::InfeasibleBounds(format!(
                "zone {}: state of charge {}",
                zone.id, state.soc[z]
            )));
        }
    }

    // injection definitions: p − (g − cw − cp + shed + discharge − charge) = fixed
    for l in 0..steps {
        let t = k + l;
        for (z, zone) in fleet.zones.iter().enumerate() {
            let mut row = vec![(layout.idx(l, z, Injection), 1.0)];
            row.extend(injection_terms(&layout, l, z).map(|(i, s)| (i, -s)));
            qp.eq.push(row, zone.wind[t] + zone.pv[t] - zone.load[t]);
        }
    }

    // flow limits: ±PTDF·p ≤ limit
    for l in 0..steps {
        let t = k + l;
        for line in 0..n_lines {
            let limit = problem.line_limits[line][t];
            if !(limit >= 0.0) {
                return Err(DispatchError::InfeasibleBounds(format!(
                    "line {line} limit {limit} at step {t}"
                )));
            }
            let row: Vec<(usize, f64)> = (0..nz)
                .filter(|&z| ptdf.get(line, z) != 0.0)
                .map(|z| (layout.idx(l, z, Injection), ptdf.get(line, z)))
                .collect();
            let neg: Vec<(usize, f64)> = row.iter().map(|&(i, a)| (i, -a)).collect();
            qp.ineq.push(row, limit);
            qp.ineq.push(neg, limit);
        }
    }
    qp.line_rows = qp.ineq.len();

    // lossless balance: Σ p = 0
    for l in 0..steps {
        let row: Vec<(usize, f64)> = (0..nz).map(|z| (layout.idx(l, z, Injection), 1.0)).collect();
        qp.eq.push(row, 0.0);
    }

    // storage dynamics and SoC tracking
    for (z, zone) in fleet.zones.iter().enumerate() {
        let Some(st) = &zone.storage else { continue };
        let gain = h / st.energy_mwh;
        for l in 0..steps {
            let soc = layout.idx(l, z, Soc);
            let mut row = vec![
                (soc, 1.0),
                (layout.idx(l, z, Charge), -st.eta_charge * gain),
                (layout.idx(l, z, Discharge), gain / st.eta_discharge),
            ];
            let rhs = if l == 0 {
                state.soc[z]
            } else {
                row.push((layout.idx(l - 1, z, Soc), -1.0));
                0.0
            };
            qp.eq.push(row, rhs);
            qp.add_square(soc, None, w.soc_ref, w.soc_tracking);
        }
    }

    // ramp cost and optional hard ramp limits
    for (z, zone) in fleet.zones.iter().enumerate() {
        let limit = settings
            .ramp_limit_mw
            .as_ref()
            .map(|v| v.get(z).copied().unwrap_or(f64::INFINITY))
            .unwrap_or(f64::INFINITY);
        if !(limit >= 0.0) {
            return Err(DispatchError::InfeasibleBounds(format!("zone {}: ramp limit {limit}", zone.id)));
        }
        let binding = limit < zone.dispatchable_mw;
        for l in 0..steps {
            let g = layout.idx(l, z, Generation);
            qp.add_square(g, None, 0.0, w.generation_quadratic);
            let prev = if l == 0 {
                state.previous_generation.as_ref().map(|p| (None, p[z]))
            } else {
                Some((Some(layout.idx(l - 1, z, Generation)), 0.0))
            };
            let Some((prev_var, prev_val)) = prev else { continue };
            qp.add_square(g, prev_var, prev_val, w.ramp);
            if binding {
                let mut up = vec![(g, 1.0)];
                let mut down = vec![(g, -1.0)];
                if let Some(p) = prev_var {
                    up.push((p, -1.0));
                    down.push((p, 1.0));
                }
                qp.ineq.push(up, limit + prev_val);
                qp.ineq.push(down, limit - prev_val);
            }
        }
    }

    Ok(qp)
}

/// Terms of zone `z`'s injection at step `l` that depend on decisions:
/// `g − cw − cp + shed + discharge − charge`.
fn injection_terms(layout: &VariableLayout, l: usize, z: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
    use ControlKind::*;
    [
        (Generation, 1.0),
        (WindCurtailment, -1.0),
        (PvCurtailment, -1.0),
        (Shed, 1.0),
        (Discharge, 1.0),
        (Charge, -1.0),
    ]
    .into_iter()
    .filter_map(move |(kind, s)| layout.get(l, z, kind).map(|i| (i, s)))
}
