use super::qp::ControlKind;
use super::{build_qp, solve_qp, DispatchError, DispatchProblem, DispatchState, QpStatus};

/// Applied dispatch of one simulation step, per zone unless noted.
#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    pub step: usize,
    pub generation: Vec<f64>,
    pub wind_used: Vec<f64>,
    pub wind_curtailed: Vec<f64>,
    pub pv_used: Vec<f64>,
    pub pv_curtailed: Vec<f64>,
    pub load_served: Vec<f64>,
    pub shed: Vec<f64>,
    pub charge: Vec<f64>,
    pub discharge: Vec<f64>,
    /// State of charge after the step.
    pub soc: Vec<f64>,
    pub injection: Vec<f64>,
    /// Per line, MW.
    pub flows: Vec<f64>,
    /// Optimal objective of the window solved at this step.
    pub window_objective: f64,
    /// Cost of the applied first step alone.
    pub stage_cost: f64,
    pub solver_status: QpStatus,
    pub iterations: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DispatchResult {
    pub steps: Vec<StepRecord>,
    pub total_cost: f64,
    pub final_state: DispatchState,
}

/// Solve a window at every step in `[0, sim_steps)`, apply its first step and
/// carry the state forward. Future feed-in, load and limits are taken as
/// known.
pub fn receding_horizon_run(
    problem: &DispatchProblem<'_>,
    sim_steps: usize,
) -> Result<DispatchResult, DispatchError> {
    receding_horizon_from(problem, 0, sim_steps, DispatchState::initial(problem.fleet))
}

/// As [`receding_horizon_run`] but over `[start, end)` from a given state.
pub fn receding_horizon_from(
    problem: &DispatchProblem<'_>,
    start: usize,
    end: usize,
    mut state: DispatchState,
) -> Result<DispatchResult, DispatchError> {
    problem.fleet.validate()?;
    if end > problem.fleet.steps() {
        return Err(DispatchError::HorizonMismatch(format!(
            "simulation needs {end} steps, data has {}",
            problem.fleet.steps()
        )));
    }
    let mut steps = Vec::with_capacity(end.saturating_sub(start));
    let mut total_cost = 0.0;
    for k in start..end {
        let record = solve_step(problem, k, &state)?;
        state = DispatchState {
            soc: record.soc.clone(),
            previous_generation: Some(record.generation.clone()),
        };
        total_cost += record.stage_cost;
        if k % 96 == 0 {
            log::debug!("step {k}: window objective {:.1}", record.window_objective);
        }
        steps.push(record);
    }
    Ok(DispatchResult {
        steps,
        total_cost,
        final_state: state,
    })
}

/// Solve the window at step `k` and extract its first step.
pub fn solve_step(
    problem: &DispatchProblem<'_>,
    k: usize,
    state: &DispatchState,
) -> Result<StepRecord, DispatchError> {
    use ControlKind::*;

    let qp = build_qp(problem, k, state)?;
    let sol = solve_qp(&qp).map_err(|e| e.at_step(k))?;
    let fleet = problem.fleet;
    let layout = &qp.layout;
    let h = problem.settings.step_hours;
    let w = &problem.settings.weights;
    let nz = fleet.zones.len();
    let val = |z: usize, kind| layout.get(0, z, kind).map_or(0.0, |i| sol.x[i]);

    let mut rec = StepRecord {
        step: k,
        generation: vec![0.0; nz],
        wind_used: vec![0.0; nz],
        wind_curtailed: vec![0.0; nz],
        pv_used: vec![0.0; nz],
        pv_curtailed: vec![0.0; nz],
        load_served: vec![0.0; nz],
        shed: vec![0.0; nz],
        charge: vec![0.0; nz],
        discharge: vec![0.0; nz],
        soc: state.soc.clone(),
        injection: vec![0.0; nz],
        flows: Vec::new(),
        window_objective: sol.objective,
        stage_cost: 0.0,
        solver_status: sol.status,
        iterations: sol.iterations,
    };
    let mut cost = 0.0;
    for (z, zone) in fleet.zones.iter().enumerate() {
        let g = val(z, Generation);
        let cw = val(z, WindCurtailment);
        let cp = val(z, PvCurtailment);
        let shed = val(z, Shed);
        let ch = val(z, Charge);
        let dis = val(z, Discharge);
        rec.generation[z] = g;
        rec.wind_curtailed[z] = cw;
        rec.wind_used[z] = zone.wind[k] - cw;
        rec.pv_curtailed[z] = cp;
        rec.pv_used[z] = zone.pv[k] - cp;
        rec.shed[z] = shed;
        rec.load_served[z] = zone.load[k] - shed;
        rec.charge[z] = ch;
        rec.discharge[z] = dis;
        rec.injection[z] = g + rec.wind_used[z] + rec.pv_used[z] + dis - ch - rec.load_served[z];
        cost += h * (w.generation * g + w.curtailment * (cw + cp) + w.shed * shed + w.storage_throughput * (ch + dis))
            + w.generation_quadratic * g * g;
        if let Some(prev) = &state.previous_generation {
            cost += w.ramp * (g - prev[z]).powi(2);
        }
        if let Some(st) = &zone.storage {
            // recomputed from the dynamics rather than read from the solver
            let next = state.soc[z] + (st.eta_charge * ch - dis / st.eta_discharge) * h / st.energy_mwh;
            rec.soc[z] = next.clamp(0.0, 1.0);
            cost += w.soc_tracking * (rec.soc[z] - w.soc_ref).powi(2);
        }
    }
    rec.flows = problem.ptdf.flows(&rec.injection);
    rec.stage_cost = cost;
    Ok(rec)
}
