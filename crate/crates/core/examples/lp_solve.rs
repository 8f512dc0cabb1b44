//! The bounded-variable simplex on its own.
//!
//!     cargo run --example lp_solve

use resilience::lp::{solve, LpProblem, DEFAULT_FEAS_TOL};
use resilience::Matrix;

fn main() -> resilience::Result<()> {
    // maximize λ  s.t.  u1 + 0.5 u3 − λ = 0,  u2 = 0,  |u_i| ≤ 1,  λ ≥ 0
    let p = LpProblem {
        objective: vec![0.0, 0.0, 0.0, 1.0],
        a_eq: Matrix::from_rows(&[[1.0, 0.0, 0.5, -1.0], [0.0, 1.0, 0.0, 0.0]])?,
        b_eq: vec![0.0, 0.0],
        lower: vec![-1.0, -1.0, -1.0, 0.0],
        upper: vec![1.0, 1.0, 1.0, f64::INFINITY],
    };
    println!("{:?}", solve(&p, DEFAULT_FEAS_TOL)?);

    let infeasible = LpProblem { b_eq: vec![0.0, 2.0], ..p };
    println!("{:?}", solve(&infeasible, DEFAULT_FEAS_TOL)?.status());
    Ok(())
}
