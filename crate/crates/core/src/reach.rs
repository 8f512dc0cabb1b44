//! Nominal and malfunctioning reach times.
//!
//! Every reach time here is the reciprocal of a single LP optimum: the
//! largest gain `λ` such that `λ·d` (shifted by whatever the lost actuators
//! inject) lies in the image of the remaining input box. Optimal inputs are
//! constant, so no trajectory is ever built.

use std::cmp::Ordering;
use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lp::{self, LpOutcome, LpProblem, DEFAULT_FEAS_TOL};
use crate::matrix::{dot, norm2, norm_inf, Matrix, DEFAULT_RANK_TOL};
use crate::system::{MalfunctionSplit, SystemSpec};

/// Tunables shared by the reach and resilience computations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Options {
    /// Absolute LP feasibility tolerance after row equilibration.
    pub feas_tol: f64,
    /// Relative pivot tolerance of the rank test.
    pub rank_tol: f64,
    /// Largest `p` for which the `2^p` disturbance vertices are enumerated.
    pub vertex_cap: usize,
    /// Normalized gains at or below this are treated as "target unreachable".
    pub lambda_min_tol: f64,
}

impl Default for Options {
    fn default() -> Self {
        Self { feas_tol: DEFAULT_FEAS_TOL, rank_tol: DEFAULT_RANK_TOL, vertex_cap: 20, lambda_min_tol: 1e-9 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ReachTime {
    Finite(f64),
    Infinite,
}

impl ReachTime {
    pub fn finite(self) -> Option<f64> {
        match self {
            ReachTime::Finite(t) => Some(t),
            ReachTime::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, ReachTime::Infinite)
    }
}

impl PartialOrd for ReachTime {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (ReachTime::Finite(a), ReachTime::Finite(b)) => a.partial_cmp(b),
            (ReachTime::Finite(_), ReachTime::Infinite) => Some(Ordering::Less),
            (ReachTime::Infinite, ReachTime::Finite(_)) => Some(Ordering::Greater),
            (ReachTime::Infinite, ReachTime::Infinite) => Some(Ordering::Equal),
        }
    }
}

impl fmt::Display for ReachTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReachTime::Finite(t) => write!(f, "{t}"),
            ReachTime::Infinite => write!(f, "inf"),
        }
    }
}

/// Ratio of malfunctioning to nominal reach time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RatioValue {
    Finite(f64),
    Infinite,
}

impl RatioValue {
    pub fn finite(self) -> Option<f64> {
        match self {
            RatioValue::Finite(r) => Some(r),
            RatioValue::Infinite => None,
        }
    }

    /// The ratio as an `f64`, with `Infinite` mapped to `f64::INFINITY`.
    pub fn as_f64(self) -> f64 {
        self.finite().unwrap_or(f64::INFINITY)
    }
}

impl fmt::Display for RatioValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RatioValue::Finite(r) => write!(f, "{r}"),
            RatioValue::Infinite => write!(f, "inf"),
        }
    }
}

/// A corner of the disturbance box: every component is `±u_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct DisturbanceVertex {
    code: u64,
    w: Vec<f64>,
}

impl DisturbanceVertex {
    /// Bit `i` of `code` gives the sign of `w_i`; a clear bit means `−u_max`.
    pub fn from_code(code: u64, p: usize, u_max: f64) -> Self {
        let w = (0..p).map(|i| if code >> i & 1 == 1 { u_max } else { -u_max }).collect();
        Self { code, w }
    }

    pub fn code(&self) -> u64 {
        self.code
    }

    pub fn w(&self) -> &[f64] {
        &self.w
    }
}

/// Optimum of `max { λ ≥ λ_lo : G u − λ·dir = offset, ‖u‖∞ ≤ bound }`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Gain {
    /// `value` in caller units; `normalized` after dividing `G` by its
    /// largest entry and `dir` by its infinity norm.
    Value { value: f64, normalized: f64 },
    Infeasible,
    Unbounded,
}

pub(crate) fn max_gain(
    generators: &Matrix,
    bound: f64,
    dir: &[f64],
    offset: &[f64],
    lambda_lower: f64,
    feas_tol: f64,
) -> Result<Gain> {
    let n = generators.rows();
    let m = generators.cols();
    let g = match generators.max_abs() {
        s if s > 0.0 => s,
        _ => 1.0,
    };
    let delta = match norm_inf(dir) {
        s if s > 0.0 => s,
        _ => 1.0,
    };
    let mut data = Vec::with_capacity(n * (m + 1));
    for i in 0..n {
        data.extend(generators.row(i).iter().map(|v| v / g));
        data.push(-dir[i] / delta);
    }
    let a_eq = Matrix::new(n, m + 1, data)?;
    let mut objective = vec![0.0; m + 1];
    objective[m] = 1.0;
    let mut lower = vec![-bound; m + 1];
    let mut upper = vec![bound; m + 1];
    lower[m] = if lambda_lower.is_finite() { lambda_lower * delta / g } else { lambda_lower };
    upper[m] = f64::INFINITY;
    let problem = LpProblem { objective, a_eq, b_eq: offset.iter().map(|v| v / g).collect(), lower, upper };
    Ok(match lp::solve(&problem, feas_tol)? {
        LpOutcome::Optimal { value, .. } => Gain::Value { value: value * g / delta, normalized: value },
        LpOutcome::Infeasible => Gain::Infeasible,
        LpOutcome::Unbounded => Gain::Unbounded,
    })
}

fn check_len(v: &[f64], n: usize, field: &'static str) -> Result<()> {
    if v.len() != n {
        return Err(Error::Validation { field, reason: format!("expected length {n}, got {}", v.len()) });
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::Validation { field, reason: "entries must be finite".into() });
    }
    Ok(())
}

fn is_zero(v: &[f64]) -> bool {
    v.iter().all(|&x| x == 0.0)
}

/// Shortest time for the healthy plant to move the state by `d`.
pub fn nominal_reach_time(sys: &SystemSpec, d: &[f64]) -> Result<ReachTime> {
    nominal_reach_time_with(sys, d, &Options::default())
}

pub fn nominal_reach_time_with(sys: &SystemSpec, d: &[f64], opts: &Options) -> Result<ReachTime> {
    check_len(d, sys.n(), "target")?;
    let rank = sys.b_bar().rank(opts.rank_tol);
    if rank < sys.n() {
        return Err(Error::NotControllable { rank, n: sys.n() });
    }
    if is_zero(d) {
        return Ok(ReachTime::Finite(0.0));
    }
    let zeros = vec![0.0; sys.n()];
    match max_gain(sys.b_bar(), sys.u_max(), d, &zeros, 0.0, opts.feas_tol)? {
        Gain::Value { value, normalized } if normalized > opts.lambda_min_tol => Ok(ReachTime::Finite(1.0 / value)),
        other => Err(Error::NumericalFailure(format!("nominal reach LP for a controllable plant returned {other:?}"))),
    }
}

/// Reach time against the fixed constant disturbance `w` on the lost columns.
pub fn disturbed_reach_time(ms: &MalfunctionSplit, w: &[f64], d: &[f64]) -> Result<ReachTime> {
    disturbed_reach_time_with(ms, w, d, &Options::default())
}

pub fn disturbed_reach_time_with(ms: &MalfunctionSplit, w: &[f64], d: &[f64], opts: &Options) -> Result<ReachTime> {
    check_len(w, ms.p(), "w")?;
    check_len(d, ms.system().n(), "target")?;
    let u_max = ms.u_max();
    for (index, &value) in w.iter().enumerate() {
        if value.abs() > u_max * (1.0 + 1e-12) {
            return Err(Error::BoundViolation { index, value, u_max });
        }
    }
    if is_zero(d) {
        return Ok(ReachTime::Finite(0.0));
    }
    let offset: Vec<f64> = ms.c().mul_vec(w).into_iter().map(|v| -v).collect();
    Ok(match max_gain(ms.b(), u_max, d, &offset, 0.0, opts.feas_tol)? {
        Gain::Value { value, normalized } if normalized > opts.lambda_min_tol => ReachTime::Finite(1.0 / value),
        Gain::Value { .. } | Gain::Infeasible => ReachTime::Infinite,
        Gain::Unbounded => {
            return Err(Error::NumericalFailure("disturbed reach LP reported an unbounded gain".into()));
        }
    })
}

/// Worst case over all `2^p` sign vertices of the disturbance box.
///
/// Returns the largest reach time and the lowest-code vertex attaining it.
/// A single unreachable vertex makes the result `Infinite`.
pub fn malfunctioning_reach_time(ms: &MalfunctionSplit, d: &[f64]) -> Result<(ReachTime, DisturbanceVertex)> {
    malfunctioning_reach_time_with(ms, d, &Options::default())
}

pub fn malfunctioning_reach_time_with(
    ms: &MalfunctionSplit,
    d: &[f64],
    opts: &Options,
) -> Result<(ReachTime, DisturbanceVertex)> {
    let p = ms.p();
    if p > opts.vertex_cap || p >= 64 {
        return Err(Error::VertexBudgetExceeded { p, cap: opts.vertex_cap });
    }
    check_len(d, ms.system().n(), "target")?;
    let u_max = ms.u_max();
    if is_zero(d) {
        return Ok((ReachTime::Finite(0.0), DisturbanceVertex::from_code(0, p, u_max)));
    }
    let count = 1u64 << p;
    let times: Vec<ReachTime> = (0..count)
        .into_par_iter()
        .map(|code| {
            let v = DisturbanceVertex::from_code(code, p, u_max);
            disturbed_reach_time_with(ms, v.w(), d, opts)
        })
        .collect::<Result<_>>()?;

    let mut best = 0usize;
    for (i, t) in times.iter().enumerate() {
        if *t > times[best] {
            best = i;
        }
    }
    Ok((times[best], DisturbanceVertex::from_code(best as u64, p, u_max)))
}

/// `T_M*(d) / T_N*(d)`, with `1` at `d = 0`.
pub fn time_ratio(ms: &MalfunctionSplit, d: &[f64]) -> Result<RatioValue> {
    time_ratio_with(ms, d, &Options::default())
}

pub fn time_ratio_with(ms: &MalfunctionSplit, d: &[f64], opts: &Options) -> Result<RatioValue> {
    Ok(reach_summary_with(ms, d, opts)?.ratio)
}

/// Everything the `reach` command prints for one target.
#[derive(Debug, Clone, PartialEq)]
pub struct ReachSummary {
    pub nominal: ReachTime,
    pub malfunctioning: ReachTime,
    pub ratio: RatioValue,
    pub worst_vertex: DisturbanceVertex,
}

pub fn reach_summary_with(ms: &MalfunctionSplit, d: &[f64], opts: &Options) -> Result<ReachSummary> {
    let nominal = nominal_reach_time_with(ms.system(), d, opts)?;
    let (malfunctioning, worst_vertex) = malfunctioning_reach_time_with(ms, d, opts)?;
    let ratio = match (nominal, malfunctioning) {
        (_, ReachTime::Infinite) => RatioValue::Infinite,
        (ReachTime::Finite(tn), ReachTime::Finite(tm)) if tn > 0.0 => RatioValue::Finite(tm / tn),
        _ => RatioValue::Finite(1.0),
    };
    Ok(ReachSummary { nominal, malfunctioning, ratio, worst_vertex })
}

/// One point of a direction sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSample {
    pub beta: f64,
    pub ratio: RatioValue,
}

/// Evaluates the time ratio along `d(β) = cos β·e1 + sin β·e2` for
/// `β = 2πk/samples`, `k = 0..samples`.
pub fn sweep_ratio(ms: &MalfunctionSplit, e1: &[f64], e2: &[f64], samples: usize) -> Result<Vec<SweepSample>> {
    sweep_ratio_with(ms, e1, e2, samples, &Options::default())
}

pub fn sweep_ratio_with(
    ms: &MalfunctionSplit,
    e1: &[f64],
    e2: &[f64],
    samples: usize,
    opts: &Options,
) -> Result<Vec<SweepSample>> {
    let n = ms.system().n();
    check_len(e1, n, "plane")?;
    check_len(e2, n, "plane")?;
    check_plane(e1, e2)?;
    if samples < 4 {
        return Err(Error::Validation { field: "samples", reason: format!("need at least 4, got {samples}") });
    }
    plane_directions(e1, e2, samples)
        .into_par_iter()
        .map(|(beta, d)| Ok(SweepSample { beta, ratio: time_ratio_with(ms, &d, opts)? }))
        .collect()
}

pub(crate) fn check_plane(e1: &[f64], e2: &[f64]) -> Result<()> {
    let ok = (norm2(e1) - 1.0).abs() <= 1e-9 && (norm2(e2) - 1.0).abs() <= 1e-9 && dot(e1, e2).abs() <= 1e-9;
    if ok {
        Ok(())
    } else {
        Err(Error::NonOrthonormalPlane)
    }
}

pub(crate) fn plane_directions(e1: &[f64], e2: &[f64], samples: usize) -> Vec<(f64, Vec<f64>)> {
    (0..samples)
        .map(|k| {
            let beta = 2.0 * std::f64::consts::PI * k as f64 / samples as f64;
            let (s, c) = beta.sin_cos();
            (beta, e1.iter().zip(e2).map(|(a, b)| c * a + s * b).collect())
        })
        .collect()
}
