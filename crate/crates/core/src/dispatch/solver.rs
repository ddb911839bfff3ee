use super::{DispatchError, QpInstance};
use clarabel::algebra::CscMatrix;
use clarabel::solver::{
    DefaultSettingsBuilder, DefaultSolver, IPSolver, NonnegativeConeT, SolverStatus, SupportedConeT, ZeroConeT,
};

/// Bounds narrower than this are imposed as equalities.
const FIXED_BOUND_WIDTH: f64 = 1e-9;
/// Relative feasibility tolerance accepted after a solve.
const FEASIBILITY_TOL: f64 = 1e-6;
const MAX_ITERATIONS: u32 = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QpStatus {
    Solved,
    /// Converged to the solver's reduced tolerances.
    AlmostSolved,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QpSolution {
    /// Primal solution projected onto the variable bounds.
    pub x: Vec<f64>,
    pub objective: f64,
    pub status: QpStatus,
    pub iterations: u32,
    pub max_violation: f64,
}

pub fn solve_qp(qp: &QpInstance) -> Result<QpSolution, DispatchError> {
    let n = qp.n;
    let fail = |reason: String| DispatchError::SolverFailure { step: 0, reason };

    let (mut pi, mut pj, mut pv) = (Vec::new(), Vec::new(), Vec::new());
    for &(i, j, v) in &qp.p {
        debug_assert!(i <= j);
        pi.push(i);
        pj.push(j);
        pv.push(v);
    }
    let p = CscMatrix::new_from_triplets(n, n, pi, pj, pv);

    let (mut ai, mut aj, mut av, mut b) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    let mut push_row = |row: &[(usize, f64)], rhs: f64, b: &mut Vec<f64>| {
        let r = b.len();
        for &(j, a) in row {
            ai.push(r);
            aj.push(j);
            av.push(a);
        }
        b.push(rhs);
    };

    let fixed: Vec<usize> = (0..n)
        .filter(|&i| qp.upper[i] - qp.lower[i] <= FIXED_BOUND_WIDTH)
        .collect();
    for (row, &rhs) in qp.eq.rows.iter().zip(&qp.eq.rhs) {
        push_row(row, rhs, &mut b);
    }
    for &i in &fixed {
        push_row(&[(i, 1.0)], 0.5 * (qp.lower[i] + qp.upper[i]), &mut b);
    }
    let n_zero = b.len();
    for (row, &rhs) in qp.ineq.rows.iter().zip(&qp.ineq.rhs) {
        push_row(row, rhs, &mut b);
    }
    for i in 0..n {
        if qp.upper[i] - qp.lower[i] <= FIXED_BOUND_WIDTH {
            continue;
        }
        if qp.upper[i].is_finite() {
            push_row(&[(i, 1.0)], qp.upper[i], &mut b);
        }
        if qp.lower[i].is_finite() {
            push_row(&[(i, -1.0)], -qp.lower[i], &mut b);
        }
    }
    let m = b.len();
    let a = CscMatrix::new_from_triplets(m, n, ai, aj, av);
    let mut cones: Vec<SupportedConeT<f64>> = Vec::with_capacity(2);
    if n_zero > 0 {
        cones.push(ZeroConeT(n_zero));
    }
    if m > n_zero {
        cones.push(NonnegativeConeT(m - n_zero));
    }

    let settings = DefaultSettingsBuilder::default()
        .verbose(false)
        .max_iter(MAX_ITERATIONS)
        .max_threads(1)
        .build()
        .map_err(|e| fail(format!("settings: {e:?}")))?;
    let mut solver = DefaultSolver::new(&p, &qp.q, &a, &b, &cones, settings).map_err(|e| fail(format!("{e}")))?;
    solver.solve();
    let sol = &solver.solution;
    let status = match sol.status {
        SolverStatus::Solved => QpStatus::Solved,
        SolverStatus::AlmostSolved => QpStatus::AlmostSolved,
        SolverStatus::PrimalInfeasible | SolverStatus::AlmostPrimalInfeasible => {
            return Err(DispatchError::Infeasible { step: 0 })
        }
        SolverStatus::MaxIterations => return Err(DispatchError::MaxIterations { step: 0 }),
        other => return Err(fail(format!("{other:?}"))),
    };

    let x: Vec<f64> = sol
        .x
        .iter()
        .enumerate()
        .map(|(i, &v)| v.clamp(qp.lower[i], qp.upper[i]))
        .collect();
    let max_violation = qp.max_violation(&x);
    if max_violation > FEASIBILITY_TOL * qp.scale() {
        return Err(fail(format!(
            "residual {max_violation:.3e} above tolerance after {:?}",
            sol.status
        )));
    }
    if status == QpStatus::AlmostSolved {
        log::warn!("QP solved to reduced accuracy in {} iterations", sol.iterations);
    }
    Ok(QpSolution {
        objective: qp.objective(&x),
        x,
        status,
        iterations: sol.iterations,
        max_violation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dispatch::qp::{SparseRows, VariableLayout};

    fn tiny(q: Vec<f64>, p: Vec<(usize, usize, f64)>, upper: Vec<f64>) -> QpInstance {
        let n = q.len();
        QpInstance {
            n,
            p,
            q,
            constant: 0.0,
            eq: SparseRows::default(),
            ineq: SparseRows::default(),
            lower: vec![0.0; n],
            upper,
            layout: VariableLayout::new(0, vec![]),
            line_rows: 0,
        }
    }

    #[test]
    fn box_constrained_quadratic() {
        // min (x - 3)² on [0, 2] -> x = 2
        let mut qp = tiny(vec![-6.0], vec![(0, 0, 2.0)], vec![2.0]);
        qp.constant = 9.0;
        let s = solve_qp(&qp).unwrap();
        assert!((s.x[0] - 2.0).abs() < 1e-6);
        assert!((s.objective - 1.0).abs() < 1e-5);
    }

    #[test]
    fn equality_linear_program() {
        // min x0 + 2 x1 s.t. x0 + x1 = 1.5, x ∈ [0, 1]²
        let mut qp = tiny(vec![1.0, 2.0], vec![], vec![1.0, 1.0]);
        qp.eq.push(vec![(0, 1.0), (1, 1.0)], 1.5);
        let s = solve_qp(&qp).unwrap();
        assert!((s.x[0] - 1.0).abs() < 1e-6 && (s.x[1] - 0.5).abs() < 1e-6);
    }

    #[test]
    fn infeasible_is_reported() {
        let mut qp = tiny(vec![1.0], vec![], vec![1.0]);
        qp.eq.push(vec![(0, 1.0)], 5.0);
        assert!(matches!(solve_qp(&qp), Err(DispatchError::Infeasible { .. })));
    }

    #[test]
    fn fixed_variables_are_honoured() {
        let mut qp = tiny(vec![-1.0, -1.0], vec![], vec![0.0, 4.0]);
        qp.ineq.push(vec![(0, 1.0), (1, 1.0)], 3.0);
        let s = solve_qp(&qp).unwrap();
        assert_eq!(s.x[0], 0.0);
        assert!((s.x[1] - 3.0).abs() < 1e-6);
    }
}
