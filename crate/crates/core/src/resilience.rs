//! Quantitative resilience to the loss of a single actuator.
//!
//! For one lost column `C`, the worst target direction is `C` itself and
//! the whole nested min-max collapses to one LP:
//!
//! ```text
//! λ* = max { λ : B υ = λ C, ‖υ‖∞ ≤ u_max }
//! r_max = (λ* − u_max) / (λ* + u_max)
//! ```
//!
//! The plant is resilient iff it is controllable and `r_max ∈ (0, 1]`, in
//! which case `r_q = r_max`; otherwise `r_q = 0`.

use rayon::prelude::*;
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::reach::{
    malfunctioning_reach_time_with, max_gain, sweep_ratio_with, DisturbanceVertex, Gain, Options, RatioValue,
};
use crate::system::{split, MalfunctionSplit, SystemSpec};

/// Marker attached to verdicts for more than one lost column.
pub const MULTI_ACTUATOR_MARKER: &str = "multi-actuator: sweep-based evidence only";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Resilient,
    NotResilient,
    NotControllable,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Resilient => "Resilient",
            Verdict::NotResilient => "NotResilient",
            Verdict::NotControllable => "NotControllable",
        })
    }
}

fn single_column(ms: &MalfunctionSplit) -> Result<()> {
    match ms.p() {
        1 => Ok(()),
        p => Err(Error::MultipleColumns { p }),
    }
}

/// Largest gain with which the kept actuators can imitate the lost column.
///
/// `+∞` when the lost column is zero. `λ` is not sign-restricted, so the
/// LP always has the feasible point `υ = 0, λ = 0`; `−∞` is returned only
/// if the solver nevertheless reports infeasibility.
pub fn lambda_star(ms: &MalfunctionSplit) -> Result<f64> {
    lambda_star_with(ms, &Options::default())
}

pub fn lambda_star_with(ms: &MalfunctionSplit, opts: &Options) -> Result<f64> {
    single_column(ms)?;
    let c = ms.c().column(0);
    if c.iter().all(|&v| v == 0.0) {
        return Ok(f64::INFINITY);
    }
    let zeros = vec![0.0; c.len()];
    Ok(match max_gain(ms.b(), ms.u_max(), &c, &zeros, f64::NEG_INFINITY, opts.feas_tol)? {
        Gain::Value { value, .. } => value,
        Gain::Infeasible => f64::NEG_INFINITY,
        Gain::Unbounded => f64::INFINITY,
    })
}

/// `(λ* − u_max) / (λ* + u_max)` for a single lost column.
pub fn r_max(ms: &MalfunctionSplit) -> Result<f64> {
    r_max_with(ms, &Options::default())
}

pub fn r_max_with(ms: &MalfunctionSplit, opts: &Options) -> Result<f64> {
    r_max_from_lambda(lambda_star_with(ms, opts)?, ms.u_max())
}

fn r_max_from_lambda(lambda: f64, u_max: f64) -> Result<f64> {
    if lambda == f64::INFINITY {
        return Ok(1.0);
    }
    if lambda == f64::NEG_INFINITY {
        // Column outside every reachable gain; the worst possible value.
        return Ok(-1.0);
    }
    let denom = lambda + u_max;
    if denom.abs() < 1e-12 * u_max {
        return Err(Error::DegenerateDenominator);
    }
    Ok((lambda - u_max) / denom)
}

fn verdict_from_r_max(r: f64) -> Verdict {
    if r > 0.0 && r <= 1.0 + 1e-9 {
        Verdict::Resilient
    } else {
        Verdict::NotResilient
    }
}

/// Resilient / not resilient / not controllable.
///
/// For several lost columns the check is the necessary condition that each
/// lost column, taken as a target, stays reachable under the worst
/// disturbance; see [`multi_column_assessment`].
pub fn resilience_verdict(ms: &MalfunctionSplit) -> Result<Verdict> {
    resilience_verdict_with(ms, &Options::default())
}

pub fn resilience_verdict_with(ms: &MalfunctionSplit, opts: &Options) -> Result<Verdict> {
    let sys = ms.system();
    if sys.b_bar().rank(opts.rank_tol) < sys.n() {
        return Ok(Verdict::NotControllable);
    }
    if ms.p() > 1 {
        return Ok(multi_column_assessment_with(ms, opts)?.verdict);
    }
    Ok(match r_max_with(ms, opts) {
        Ok(r) => verdict_from_r_max(r),
        Err(Error::DegenerateDenominator) => Verdict::NotResilient,
        Err(e) => return Err(e),
    })
}

/// `r_q` for a single lost column: `r_max` when resilient, else `0`.
pub fn quantitative_resilience(ms: &MalfunctionSplit) -> Result<f64> {
    quantitative_resilience_with(ms, &Options::default())
}

pub fn quantitative_resilience_with(ms: &MalfunctionSplit, opts: &Options) -> Result<f64> {
    single_column(ms)?;
    Ok(match resilience_verdict_with(ms, opts)? {
        Verdict::Resilient => r_max_with(ms, opts)?.min(1.0),
        Verdict::NotResilient | Verdict::NotControllable => 0.0,
    })
}

/// Heuristic verdict for `p > 1` lost columns.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultiColumnAssessment {
    pub verdict: Verdict,
    pub heuristic: bool,
    pub marker: &'static str,
}

pub fn multi_column_assessment(ms: &MalfunctionSplit) -> Result<MultiColumnAssessment> {
    multi_column_assessment_with(ms, &Options::default())
}

pub fn multi_column_assessment_with(ms: &MalfunctionSplit, opts: &Options) -> Result<MultiColumnAssessment> {
    let sys = ms.system();
    let verdict = if sys.b_bar().rank(opts.rank_tol) < sys.n() {
        Verdict::NotControllable
    } else {
        let mut verdict = Verdict::Resilient;
        for j in 0..ms.p() {
            let (t, _) = malfunctioning_reach_time_with(ms, &ms.c().column(j), opts)?;
            if t.is_infinite() {
                verdict = Verdict::NotResilient;
                break;
            }
        }
        verdict
    };
    Ok(MultiColumnAssessment { verdict, heuristic: true, marker: MULTI_ACTUATOR_MARKER })
}

/// Upper bound on `r_q` from a direction sweep: `1 / max t(d)` over the
/// sampled directions (`0` if any sampled direction is unreachable). Valid
/// for any number of lost columns.
pub fn sweep_rq_upper_bound(ms: &MalfunctionSplit, e1: &[f64], e2: &[f64], samples: usize, opts: &Options) -> Result<f64> {
    let worst = sweep_ratio_with(ms, e1, e2, samples, opts)?
        .iter()
        .map(|s| s.ratio)
        .fold(1.0f64, |m, r| match r {
            RatioValue::Finite(v) => m.max(v),
            RatioValue::Infinite => f64::INFINITY,
        });
    Ok(if worst.is_finite() { 1.0 / worst } else { 0.0 })
}

/// One row of a resilience report.
#[derive(Debug, Clone, PartialEq)]
pub struct ColumnResilience {
    pub column_index: usize,
    pub lambda_star: f64,
    pub r_max: f64,
    pub verdict: Verdict,
    pub r_q: f64,
    /// Worst disturbance vertex for the target `d = C`.
    pub worst_vertex: DisturbanceVertex,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResilienceReport {
    pub controllable: bool,
    pub per_column: Vec<ColumnResilience>,
}

impl ResilienceReport {
    /// Smallest `r_q` over all single-column losses.
    pub fn min_rq(&self) -> f64 {
        self.per_column.iter().map(|c| c.r_q).fold(f64::INFINITY, f64::min)
    }

    pub fn r_max_vector(&self) -> Vec<f64> {
        self.per_column.iter().map(|c| c.r_max).collect()
    }

    pub fn r_q_vector(&self) -> Vec<f64> {
        self.per_column.iter().map(|c| c.r_q).collect()
    }
}

/// Resilience of one lost column, assembled from the LPs above.
pub fn column_resilience(sys: &SystemSpec, column: usize, opts: &Options) -> Result<ColumnResilience> {
    let ms = split(sys, &[column])?;
    let lambda = lambda_star_with(&ms, opts)?;
    let r_max = match r_max_from_lambda(lambda, ms.u_max()) {
        Ok(r) => r,
        Err(Error::DegenerateDenominator) => f64::NEG_INFINITY,
        Err(e) => return Err(e),
    };
    let controllable = sys.b_bar().rank(opts.rank_tol) == sys.n();
    let verdict = if !controllable { Verdict::NotControllable } else { verdict_from_r_max(r_max) };
    let r_q = if verdict == Verdict::Resilient { r_max.min(1.0) } else { 0.0 };
    let (_, worst_vertex) = malfunctioning_reach_time_with(&ms, &ms.c().column(0), opts)?;
    Ok(ColumnResilience { column_index: column, lambda_star: lambda, r_max, verdict, r_q, worst_vertex })
}

/// Treats every column of `B̄` in turn as the lost one.
pub fn full_report(sys: &SystemSpec) -> Result<ResilienceReport> {
    full_report_with(sys, &Options::default())
}

pub fn full_report_with(sys: &SystemSpec, opts: &Options) -> Result<ResilienceReport> {
    let controllable = sys.b_bar().rank(opts.rank_tol) == sys.n();
    if sys.num_inputs() < 2 {
        return Ok(ResilienceReport { controllable, per_column: Vec::new() });
    }
    let per_column = (0..sys.num_inputs())
        .into_par_iter()
        .map(|j| column_resilience(sys, j, opts))
        .collect::<Result<Vec<_>>>()?;
    Ok(ResilienceReport { controllable, per_column })
}

/// Rounds to `digits` significant digits (JSON and CSV output).
pub fn round_sig(v: f64, digits: usize) -> f64 {
    if !v.is_finite() || v == 0.0 {
        return v;
    }
    format!("{:.*e}", digits.saturating_sub(1), v).parse().unwrap_or(v)
}

fn json_number(v: f64) -> serde_json::Value {
    if v == f64::INFINITY {
        serde_json::Value::String("inf".into())
    } else if v == f64::NEG_INFINITY {
        serde_json::Value::String("-inf".into())
    } else {
        serde_json::json!(round_sig(v, 12))
    }
}

impl Serialize for ColumnResilience {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("ColumnResilience", 6)?;
        s.serialize_field("column_index", &self.column_index)?;
        s.serialize_field("lambda_star", &json_number(self.lambda_star))?;
        s.serialize_field("r_max", &json_number(self.r_max))?;
        s.serialize_field("verdict", &self.verdict)?;
        s.serialize_field("r_q", &json_number(self.r_q))?;
        s.serialize_field("worst_vertex", &self.worst_vertex.w())?;
        s.end()
    }
}

impl ResilienceReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Matrix;
    use crate::reach::time_ratio;

    fn micro() -> MalfunctionSplit {
        let sys = SystemSpec::from_rows(&[[1.0, 0.0, 0.5], [0.0, 1.0, 0.0]], 1.0).unwrap();
        split(&sys, &[2]).unwrap()
    }

    #[test]
    fn lambda_star_examples() {
        assert!((lambda_star(&micro()).unwrap() - 2.0).abs() < 1e-12);
        let sys = SystemSpec::from_rows(&[[1.0, 2.0]], 1.0).unwrap();
        let ms = split(&sys, &[1]).unwrap();
        assert!((lambda_star(&ms).unwrap() - 0.5).abs() < 1e-12);
        assert!((r_max(&ms).unwrap() + 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(resilience_verdict(&ms).unwrap(), Verdict::NotResilient);
        assert_eq!(quantitative_resilience(&ms).unwrap(), 0.0);
    }

    #[test]
    fn micro_system_rq_matches_ratio_along_c() {
        let ms = micro();
        assert!((r_max(&ms).unwrap() - 1.0 / 3.0).abs() < 1e-12);
        let rq = quantitative_resilience(&ms).unwrap();
        let t = time_ratio(&ms, &ms.c().column(0)).unwrap().finite().unwrap();
        assert!((rq - 1.0 / t).abs() < 1e-9);
    }

    #[test]
    fn zero_column_is_fully_resilient() {
        let sys = SystemSpec::from_rows(&[[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]], 1.0).unwrap();
        let ms = split(&sys, &[2]).unwrap();
        assert_eq!(lambda_star(&ms).unwrap(), f64::INFINITY);
        assert_eq!(r_max(&ms).unwrap(), 1.0);
        assert_eq!(resilience_verdict(&ms).unwrap(), Verdict::Resilient);
        assert_eq!(quantitative_resilience(&ms).unwrap(), 1.0);
    }

    #[test]
    fn multiple_columns_rejected_for_exact_rq() {
        let sys = SystemSpec::from_rows(&[[1.0, 0.0, 0.5, 0.1], [0.0, 1.0, 0.0, 0.1]], 1.0).unwrap();
        let ms = split(&sys, &[2, 3]).unwrap();
        assert!(matches!(lambda_star(&ms), Err(Error::MultipleColumns { p: 2 })));
        assert!(matches!(quantitative_resilience(&ms), Err(Error::MultipleColumns { p: 2 })));
        let a = multi_column_assessment(&ms).unwrap();
        assert!(a.heuristic);
        assert_eq!(a.marker, MULTI_ACTUATOR_MARKER);
        assert_eq!(resilience_verdict(&ms).unwrap(), a.verdict);
    }

    #[test]
    fn identity_loses_either_column() {
        let sys = SystemSpec::new(Matrix::identity(2), 1.0).unwrap();
        let report = full_report(&sys).unwrap();
        assert!(report.controllable);
        for c in &report.per_column {
            assert_eq!(c.verdict, Verdict::NotResilient);
            assert!(c.lambda_star.abs() < 1e-12);
            assert!((c.r_max + 1.0).abs() < 1e-12);
            assert_eq!(c.r_q, 0.0);
        }
    }

    #[test]
    fn rank_deficient_is_not_controllable() {
        let sys = SystemSpec::from_rows(&[[1.0, 1.0], [1.0, 1.0]], 1.0).unwrap();
        let ms = split(&sys, &[1]).unwrap();
        assert_eq!(resilience_verdict(&ms).unwrap(), Verdict::NotControllable);
        assert_eq!(quantitative_resilience(&ms).unwrap(), 0.0);
    }

    #[test]
    fn json_uses_inf_string() {
        let sys = SystemSpec::from_rows(&[[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]], 1.0).unwrap();
        let json = full_report(&sys).unwrap().to_json();
        assert!(json.contains("\"lambda_star\": \"inf\""), "{json}");
    }

    #[test]
    fn round_sig_keeps_twelve_digits() {
        assert_eq!(round_sig(1.0 / 3.0, 12), 0.333333333333);
        assert_eq!(round_sig(0.0, 12), 0.0);
    }
}
