//! Dense bounded-variable simplex for small equality-constrained programs.
//!
//! Solves
//!
//! ```text
//! maximize    cᵀz
//! subject to  A z = b,   lower ≤ z ≤ upper
//! ```
//!
//! where either bound of a variable may be infinite. Variables keep their
//! bounds explicitly (no slack inflation). The method is a two-phase revised
//! simplex: phase 1 minimizes the sum of one artificial per row, phase 2
//! optimizes `c` with the artificials pinned to zero. Entering and leaving
//! choices follow Bland's lowest-index rule, so the method terminates on
//! degenerate problems and is deterministic.
//!
//! Rows of `A` are equilibrated to unit max-norm before solving; variables
//! are untouched, so the returned point is in the caller's units.

use thiserror::Error;

use crate::matrix::{norm_inf, solve_square, Matrix};

/// Default absolute feasibility tolerance (after row equilibration).
pub const DEFAULT_FEAS_TOL: f64 = 1e-10;

const DUAL_TOL: f64 = 1e-11;
const PIVOT_TOL: f64 = 1e-11;
const SINGULAR_TOL: f64 = 1e-14;
const MAX_ITERATIONS: usize = 50_000;

#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem {
    pub objective: Vec<f64>,
    pub a_eq: Matrix,
    pub b_eq: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { value: f64, point: Vec<f64> },
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn status(&self) -> LpStatus {
        match self {
            LpOutcome::Optimal { .. } => LpStatus::Optimal,
            LpOutcome::Infeasible => LpStatus::Infeasible,
            LpOutcome::Unbounded => LpStatus::Unbounded,
        }
    }

    pub fn value(&self) -> Option<f64> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(*value),
            _ => None,
        }
    }

    pub fn point(&self) -> Option<&[f64]> {
        match self {
            LpOutcome::Optimal { point, .. } => Some(point),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum LpError {
    #[error("LP dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("LP bounds invalid for variable {0}: lower > upper or NaN")]
    InvalidBounds(usize),
    #[error("simplex did not terminate within {0} iterations")]
    IterationLimit(usize),
    #[error("simplex basis became singular")]
    SingularBasis,
}

impl LpProblem {
    fn validate(&self) -> Result<(), LpError> {
        let q = self.objective.len();
        let k = self.b_eq.len();
        if self.a_eq.cols() != q || self.a_eq.rows() != k {
            return Err(LpError::DimensionMismatch(format!(
                "a_eq is {}x{}, expected {k}x{q}",
                self.a_eq.rows(),
                self.a_eq.cols()
            )));
        }
        if self.lower.len() != q || self.upper.len() != q {
            return Err(LpError::DimensionMismatch(format!(
                "bounds have lengths {}/{}, expected {q}",
                self.lower.len(),
                self.upper.len()
            )));
        }
        if self.objective.iter().chain(&self.b_eq).any(|v| !v.is_finite()) {
            return Err(LpError::DimensionMismatch("objective and b_eq must be finite".into()));
        }
        for j in 0..q {
            let (l, u) = (self.lower[j], self.upper[j]);
            if l.is_nan() || u.is_nan() || l > u || l == f64::INFINITY || u == f64::NEG_INFINITY {
                return Err(LpError::InvalidBounds(j));
            }
        }
        Ok(())
    }
}

/// Solves `p`. Numerical outcomes (infeasible, unbounded) are statuses;
/// only malformed input or a solver breakdown is an error.
pub fn solve(p: &LpProblem, feas_tol: f64) -> Result<LpOutcome, LpError> {
    p.validate()?;
    let q = p.objective.len();

    // Equilibrate rows; drop all-zero rows after checking their rhs.
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(p.b_eq.len());
    let mut rhs = Vec::with_capacity(p.b_eq.len());
    for (i, &b) in p.b_eq.iter().enumerate() {
        let row = p.a_eq.row(i);
        let scale = norm_inf(row);
        if scale == 0.0 {
            if b.abs() > feas_tol {
                return Ok(LpOutcome::Infeasible);
            }
            continue;
        }
        rows.push(row.iter().map(|v| v / scale).collect());
        rhs.push(b / scale);
    }

    let mut s = Simplex::new(rows, rhs, p.lower.clone(), p.upper.clone(), feas_tol);

    // Phase 1: maximize −Σ artificials.
    let mut phase1 = vec![0.0; s.total];
    for a in q..s.total {
        phase1[a] = -1.0;
    }
    match s.optimize(&phase1)? {
        Phase::Optimal => {}
        Phase::Unbounded => return Err(LpError::SingularBasis),
    }
    let infeasibility: f64 = (q..s.total).map(|a| s.x[a]).sum();
    if infeasibility > feas_tol * (1.0 + norm_inf(&s.rhs)) {
        return Ok(LpOutcome::Infeasible);
    }

    // Phase 2: pin artificials at zero; any still basic sit at (near) zero
    // and are driven out by degenerate pivots when they block.
    for a in q..s.total {
        s.lower[a] = 0.0;
        s.upper[a] = 0.0;
        if !s.is_basic[a] {
            s.x[a] = 0.0;
        }
    }
    let mut objective = p.objective.clone();
    objective.resize(s.total, 0.0);
    match s.optimize(&objective)? {
        Phase::Unbounded => Ok(LpOutcome::Unbounded),
        Phase::Optimal => {
            let point: Vec<f64> = (0..q).map(|j| s.x[j].clamp(p.lower[j], p.upper[j])).collect();
            let value = p.objective.iter().zip(&point).map(|(c, z)| c * z).sum();
            Ok(LpOutcome::Optimal { value, point })
        }
    }
}

enum Phase {
    Optimal,
    Unbounded,
}

/// Working state: structural columns `0..q`, artificial columns `q..q+k`.
struct Simplex {
    k: usize,
    total: usize,
    /// Column-major storage of `[A | diag(sign)]`.
    columns: Vec<Vec<f64>>,
    rhs: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    x: Vec<f64>,
    basis: Vec<usize>,
    is_basic: Vec<bool>,
    feas_tol: f64,
}

impl Simplex {
    fn new(rows: Vec<Vec<f64>>, rhs: Vec<f64>, mut lower: Vec<f64>, mut upper: Vec<f64>, feas_tol: f64) -> Self {
        let k = rows.len();
        let q = lower.len();
        let total = q + k;

        // Nonbasic structurals start at a finite bound, or at zero if free.
        let mut x: Vec<f64> = (0..q)
            .map(|j| {
                if lower[j].is_finite() {
                    lower[j]
                } else if upper[j].is_finite() {
                    upper[j]
                } else {
                    0.0
                }
            })
            .collect();

        let mut columns: Vec<Vec<f64>> = (0..q).map(|j| rows.iter().map(|r| r[j]).collect()).collect();
        for i in 0..k {
            let resid = rhs[i] - rows[i].iter().zip(&x).map(|(a, v)| a * v).sum::<f64>();
            let mut col = vec![0.0; k];
            col[i] = if resid < 0.0 { -1.0 } else { 1.0 };
            columns.push(col);
            x.push(resid.abs());
            lower.push(0.0);
            upper.push(f64::INFINITY);
        }
        let basis: Vec<usize> = (q..total).collect();
        let mut is_basic = vec![false; total];
        for &b in &basis {
            is_basic[b] = true;
        }
        Self { k, total, columns, rhs, lower, upper, x, basis, is_basic, feas_tol }
    }

    fn basis_matrix(&self, transpose: bool) -> Vec<f64> {
        let k = self.k;
        let mut m = vec![0.0; k * k];
        for (c, &j) in self.basis.iter().enumerate() {
            for r in 0..k {
                if transpose {
                    m[c * k + r] = self.columns[j][r];
                } else {
                    m[r * k + c] = self.columns[j][r];
                }
            }
        }
        m
    }

    /// Recomputes basic values from the nonbasic ones.
    fn refresh_basic(&mut self, bmat: &[f64]) -> Result<(), LpError> {
        let k = self.k;
        let mut r = self.rhs.clone();
        for j in 0..self.total {
            if !self.is_basic[j] && self.x[j] != 0.0 {
                for i in 0..k {
                    r[i] -= self.columns[j][i] * self.x[j];
                }
            }
        }
        let xb = solve_square(bmat, k, &r, SINGULAR_TOL).ok_or(LpError::SingularBasis)?;
        for (i, &j) in self.basis.iter().enumerate() {
            self.x[j] = xb[i];
        }
        Ok(())
    }

    fn optimize(&mut self, c: &[f64]) -> Result<Phase, LpError> {
        let k = self.k;
        for _ in 0..MAX_ITERATIONS {
            let bmat = self.basis_matrix(false);
            self.refresh_basic(&bmat)?;
            let cb: Vec<f64> = self.basis.iter().map(|&j| c[j]).collect();
            let y = solve_square(&self.basis_matrix(true), k, &cb, SINGULAR_TOL).ok_or(LpError::SingularBasis)?;

            // Bland: lowest-index nonbasic variable with an improving direction.
            let mut entering = None;
            for j in 0..self.total {
                if self.is_basic[j] || self.lower[j] == self.upper[j] {
                    continue;
                }
                let reduced = c[j] - y.iter().zip(&self.columns[j]).map(|(a, b)| a * b).sum::<f64>();
                let can_rise = self.x[j] < self.upper[j];
                let can_fall = self.x[j] > self.lower[j];
                if reduced > DUAL_TOL && can_rise {
                    entering = Some((j, 1.0));
                    break;
                }
                if reduced < -DUAL_TOL && can_fall {
                    entering = Some((j, -1.0));
                    break;
                }
            }
            let Some((j, dir)) = entering else {
                return Ok(Phase::Optimal);
            };

            let alpha = solve_square(&bmat, k, &self.columns[j], SINGULAR_TOL).ok_or(LpError::SingularBasis)?;

            // Ratio test. Basic values move as x_B − dir·t·alpha.
            let limits: Vec<Option<f64>> = self
                .basis
                .iter()
                .enumerate()
                .map(|(r, &bj)| {
                    let rate = dir * alpha[r];
                    let limit = if rate > PIVOT_TOL {
                        (self.x[bj] - self.lower[bj]) / rate
                    } else if rate < -PIVOT_TOL {
                        (self.upper[bj] - self.x[bj]) / -rate
                    } else {
                        return None;
                    };
                    limit.is_finite().then(|| limit.max(0.0))
                })
                .collect();
            let min_limit = limits.iter().flatten().fold(f64::INFINITY, |m, &v| m.min(v));
            let own_range = self.upper[j] - self.lower[j];

            let mut step = own_range;
            let mut leaving: Option<(usize, usize)> = None; // (basis row, variable)
            if min_limit < own_range {
                // Bland: among near-ties, the lowest variable index leaves.
                for (r, limit) in limits.iter().enumerate() {
                    let Some(limit) = *limit else { continue };
                    let bj = self.basis[r];
                    if limit <= min_limit + self.feas_tol && leaving.map_or(true, |(_, cur)| bj < cur) {
                        leaving = Some((r, bj));
                        step = limit;
                    }
                }
            }
            if !step.is_finite() {
                return Ok(Phase::Unbounded);
            }

            match leaving {
                None => {
                    // Bound flip of the entering variable.
                    self.x[j] = if dir > 0.0 { self.upper[j] } else { self.lower[j] };
                }
                Some((r, bj)) => {
                    let rate = dir * alpha[r];
                    self.x[bj] = if rate > 0.0 { self.lower[bj] } else { self.upper[bj] };
                    self.x[j] += dir * step;
                    self.is_basic[bj] = false;
                    self.is_basic[j] = true;
                    self.basis[r] = j;
                }
            }
        }
        Err(LpError::IterationLimit(MAX_ITERATIONS))
    }
}
