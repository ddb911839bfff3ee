mod common;

use common::{exhaustive_search, oracle_cost, qp_solution, random_case};

fn check(seed: u64, nodes: usize, steps: usize, storage: bool) {
    let case = random_case(seed, nodes, steps, storage);
    let brute = exhaustive_search(&case.instance, 21).expect("some grid point is feasible");
    let (qp, p, s) = qp_solution(&case);
    assert!(
        qp <= brute + 1e-6 * brute.abs().max(1.0),
        "seed {seed}: QP {qp} above grid search {brute}"
    );
    // the search's cost model agrees with the QP objective at the QP optimum
    let at_qp = oracle_cost(&case.instance, &p, &s).expect("QP optimum is feasible");
    assert!((at_qp - qp).abs() <= 1e-4 * qp.abs().max(1.0), "seed {seed}: oracle {at_qp}, QP {qp}");
}

#[test]
fn two_nodes_without_storage() {
    for seed in 0..4 {
        check(seed, 2, 1 + seed as usize % 4, false);
    }
}

#[test]
fn two_nodes_with_storage() {
    for seed in 10..13 {
        check(seed, 2, 1 + seed as usize % 3, true);
    }
}

#[test]
fn three_nodes() {
    for seed in 20..24 {
        check(seed, 3, 1 + seed as usize % 4, false);
    }
}
