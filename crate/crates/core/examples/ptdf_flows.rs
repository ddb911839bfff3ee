//! DC power flow on the six-zone benchmark: PTDF matrix and the flows of one
//! balanced injection pattern, checked against a direct nodal solve.
//!
//! ```text
//! cargo run --example ptdf_flows
//! ```

use dlrsim::grid::build_ptdf;
use dlrsim::scenario::Benchmark;
use nalgebra::{DMatrix, DVector};

fn main() {
    let bench = Benchmark::shipped();
    let model = bench.grid_model().expect("benchmark grid");
    let slack = bench.slack_index();
    let ptdf = build_ptdf(&model, slack).expect("connected grid");
    let ids = bench.zone_ids();

    println!("PTDF (slack {}):", ids[slack]);
    print!("{:<6}", "");
    for id in &ids {
        print!("{id:>8}");
    }
    println!();
    for l in 0..ptdf.n_lines() {
        print!("{:<6}", model.line_label(l));
        for z in 0..ptdf.n_nodes() {
            print!("{:>8.3}", ptdf.get(l, z));
        }
        println!();
    }

    // windy north exporting to the south, MW
    let injection = [6000.0, -1500.0, -3000.0, -2500.0, 4000.0, -3000.0];
    let flows = ptdf.flows(&injection);

    // direct solve of B θ = P with the slack angle fixed at zero
    let n = ids.len();
    let base = model.base_mva();
    let mut b = DMatrix::<f64>::zeros(n, n);
    for line in model.lines() {
        let (i, j, s) = (line.from, line.to, line.susceptance);
        b[(i, i)] += s;
        b[(j, j)] += s;
        b[(i, j)] -= s;
        b[(j, i)] -= s;
    }
    let keep: Vec<usize> = (0..n).filter(|&i| i != slack).collect();
    let br = DMatrix::from_fn(n - 1, n - 1, |r, c| b[(keep[r], keep[c])]);
    let p = DVector::from_iterator(n - 1, keep.iter().map(|&i| injection[i] / base));
    let theta_r = br.lu().solve(&p).expect("non-singular");
    let mut theta = vec![0.0; n];
    for (r, &i) in keep.iter().enumerate() {
        theta[i] = theta_r[r];
    }

    println!("\n{:<6} {:>10} {:>10} {:>8}", "line", "PTDF MW", "nodal MW", "NLR MVA");
    for (l, line) in model.lines().iter().enumerate() {
        let direct = line.susceptance * (theta[line.from] - theta[line.to]) * base;
        println!("{:<6} {:>10.1} {:>10.1} {:>8.0}", model.line_label(l), flows[l], direct, line.nlr_mva);
    }
}
