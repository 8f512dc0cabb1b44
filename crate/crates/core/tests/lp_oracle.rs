use proptest::prelude::*;
use resilience::lp::{solve, LpOutcome, LpProblem, DEFAULT_FEAS_TOL};
use resilience::Matrix;

/// Gaussian elimination with partial pivoting; `None` if singular.
fn gauss(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-9 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            for c in col..n {
                a[r][c] -= f * a[col][c];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    Some(x)
}

fn subsets(q: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << q).filter(|m| m.count_ones() as usize == k).map(|m| (0..q).filter(|i| m >> i & 1 == 1).collect()).collect()
}

/// Best objective over all basic solutions, or `None` if none is feasible.
fn brute_force(c: &[f64], a: &[Vec<f64>], b: &[f64], lo: &[f64], hi: &[f64]) -> Option<f64> {
    let (k, q) = (b.len(), c.len());
    let mut best: Option<f64> = None;
    for basis in subsets(q, k) {
        let nonbasic: Vec<usize> = (0..q).filter(|j| !basis.contains(j)).collect();
        for mask in 0u32..1 << nonbasic.len() {
            let mut z = vec![0.0; q];
            for (t, &j) in nonbasic.iter().enumerate() {
                z[j] = if mask >> t & 1 == 1 { hi[j] } else { lo[j] };
            }
            let rhs: Vec<f64> = (0..k).map(|i| b[i] - nonbasic.iter().map(|&j| a[i][j] * z[j]).sum::<f64>()).collect();
            let sub: Vec<Vec<f64>> = (0..k).map(|i| basis.iter().map(|&j| a[i][j]).collect()).collect();
            let Some(xb) = gauss(sub, rhs) else { continue };
            for (t, &j) in basis.iter().enumerate() {
                z[j] = xb[t];
            }
            if (0..q).all(|j| z[j] >= lo[j] - 1e-9 && z[j] <= hi[j] + 1e-9) {
                let v: f64 = c.iter().zip(&z).map(|(x, y)| x * y).sum();
                best = Some(best.map_or(v, |bv: f64| bv.max(v)));
            }
        }
    }
    best
}

fn problem(c: Vec<f64>, a: &[Vec<f64>], b: Vec<f64>, lo: Vec<f64>, hi: Vec<f64>) -> LpProblem {
    LpProblem { objective: c, a_eq: Matrix::from_rows(a).unwrap(), b_eq: b, lower: lo, upper: hi }
}

#[derive(Debug, Clone)]
struct Case {
    c: Vec<f64>,
    a: Vec<Vec<f64>>,
    b: Vec<f64>,
    lo: Vec<f64>,
    hi: Vec<f64>,
}

fn case(feasible: bool) -> impl Strategy<Value = Case> {
    (2usize..=4).prop_flat_map(move |q| {
        (1usize..q.min(3) + 1).prop_flat_map(move |k| {
            (
                prop::collection::vec(-2.0f64..2.0, q),
                prop::collection::vec(prop::collection::vec(-2.0f64..2.0, q), k),
                prop::collection::vec(-1.5f64..-0.1, q),
                prop::collection::vec(0.1f64..1.5, q),
                prop::collection::vec(-1.0f64..1.0, q),
                prop::collection::vec(-3.0f64..3.0, k),
            )
                .prop_map(move |(c, a, lo, hi, t, rb)| {
                    let b = if feasible {
                        // b from an interior point guarantees feasibility.
                        let z: Vec<f64> = (0..q).map(|j| lo[j] + (t[j] + 1.0) / 2.0 * (hi[j] - lo[j])).collect();
                        a.iter().map(|row| row.iter().zip(&z).map(|(x, y)| x * y).sum()).collect()
                    } else {
                        rb
                    };
                    Case { c, a, b, lo, hi }
                })
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn feasible_optimum_matches_vertex_enumeration(cs in case(true)) {
        let expected = brute_force(&cs.c, &cs.a, &cs.b, &cs.lo, &cs.hi);
        let out = solve(&problem(cs.c.clone(), &cs.a, cs.b.clone(), cs.lo.clone(), cs.hi.clone()), DEFAULT_FEAS_TOL).unwrap();
        let expected = expected.expect("interior point makes it feasible");
        let got = out.value().expect("optimal");
        prop_assert!((got - expected).abs() <= 1e-7 * (1.0 + expected.abs()), "got {got}, expected {expected}");
        let z = out.point().unwrap();
        for j in 0..z.len() {
            prop_assert!(z[j] >= cs.lo[j] - 1e-9 && z[j] <= cs.hi[j] + 1e-9);
        }
        for (row, b) in cs.a.iter().zip(&cs.b) {
            let lhs: f64 = row.iter().zip(z).map(|(x, y)| x * y).sum();
            prop_assert!((lhs - b).abs() < 1e-7);
        }
    }

    #[test]
    fn status_matches_vertex_enumeration(cs in case(false)) {
        let expected = brute_force(&cs.c, &cs.a, &cs.b, &cs.lo, &cs.hi);
        let out = solve(&problem(cs.c.clone(), &cs.a, cs.b.clone(), cs.lo.clone(), cs.hi.clone()), DEFAULT_FEAS_TOL).unwrap();
        match (expected, &out) {
            (Some(v), LpOutcome::Optimal { value, .. }) => prop_assert!((value - v).abs() <= 1e-7 * (1.0 + v.abs())),
            (None, LpOutcome::Infeasible) => {}
            // Boundary cases within tolerance of feasibility may go either way.
            (Some(v), LpOutcome::Infeasible) => prop_assert!(false, "missed feasible optimum {v}"),
            (None, LpOutcome::Optimal { point, .. }) => {
                let viol = cs.a.iter().zip(&cs.b)
                    .map(|(row, b)| (row.iter().zip(point).map(|(x, y)| x * y).sum::<f64>() - b).abs())
                    .fold(0.0, f64::max);
                prop_assert!(viol < 1e-8, "brute force says infeasible, solver residual {viol}");
            }
            (_, LpOutcome::Unbounded) => prop_assert!(false, "finite bounds cannot be unbounded"),
        }
    }

    #[test]
    fn power_of_two_row_scaling_is_exact(cs in case(true), e in prop::collection::vec(-6i32..6, 3)) {
        let base = solve(&problem(cs.c.clone(), &cs.a, cs.b.clone(), cs.lo.clone(), cs.hi.clone()), DEFAULT_FEAS_TOL).unwrap();
        let a2: Vec<Vec<f64>> = cs.a.iter().enumerate().map(|(i, r)| r.iter().map(|v| v * 2f64.powi(e[i])).collect()).collect();
        let b2: Vec<f64> = cs.b.iter().enumerate().map(|(i, v)| v * 2f64.powi(e[i])).collect();
        let scaled = solve(&problem(cs.c.clone(), &a2, b2, cs.lo.clone(), cs.hi.clone()), DEFAULT_FEAS_TOL).unwrap();
        prop_assert_eq!(base, scaled);
    }

    #[test]
    fn repeated_solves_are_identical(cs in case(false)) {
        let p = problem(cs.c.clone(), &cs.a, cs.b.clone(), cs.lo.clone(), cs.hi.clone());
        prop_assert_eq!(solve(&p, DEFAULT_FEAS_TOL).unwrap(), solve(&p, DEFAULT_FEAS_TOL).unwrap());
    }
}

#[test]
fn free_variable_with_box_partner() {
    // maximize x0 s.t. x0 − x1 = 0, x1 ∈ [−1, 2], x0 free.
    let p = problem(vec![1.0, 0.0], &[vec![1.0, -1.0]], vec![0.0], vec![f64::NEG_INFINITY, -1.0], vec![f64::INFINITY, 2.0]);
    assert_eq!(solve(&p, DEFAULT_FEAS_TOL).unwrap().value(), Some(2.0));
}
