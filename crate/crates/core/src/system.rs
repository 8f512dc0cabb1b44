//! Plant data model: the control matrix `B̄`, the input bound, and the split
//! of `B̄` into controlled and lost columns.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{Matrix, DEFAULT_RANK_TOL};

/// A driftless linear plant `ẋ = B̄ ū` with `‖ū‖∞ ≤ u_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemSpec {
    b_bar: Matrix,
    u_max: f64,
}

/// On-disk JSON layout of a system.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SystemFile {
    pub n: usize,
    pub u_max: f64,
    pub b_bar: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lost: Option<Vec<usize>>,
}

impl SystemSpec {
    pub fn new(b_bar: Matrix, u_max: f64) -> Result<Self> {
        if b_bar.rows() == 0 {
            return Err(Error::Validation { field: "n", reason: "state dimension must be at least 1".into() });
        }
        if b_bar.cols() == 0 {
            return Err(Error::Validation { field: "b_bar", reason: "at least one input column is required".into() });
        }
        if !(u_max.is_finite() && u_max > 0.0) {
            return Err(Error::Validation { field: "u_max", reason: format!("must be positive and finite, got {u_max}") });
        }
        Ok(Self { b_bar, u_max })
    }

    /// Convenience constructor from nested rows.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R], u_max: f64) -> Result<Self> {
        let b_bar = Matrix::from_rows(rows).map_err(|e| match e {
            Error::Validation { reason, .. } => Error::Validation { field: "b_bar", reason },
            other => other,
        })?;
        Self::new(b_bar, u_max)
    }

    pub fn n(&self) -> usize {
        self.b_bar.rows()
    }

    pub fn num_inputs(&self) -> usize {
        self.b_bar.cols()
    }

    pub fn b_bar(&self) -> &Matrix {
        &self.b_bar
    }

    pub fn u_max(&self) -> f64 {
        self.u_max
    }

    /// Same plant with `B̄` multiplied by `s`.
    pub fn scaled(&self, s: f64) -> Result<Self> {
        Self::new(self.b_bar.scaled(s), self.u_max)
    }

    pub fn with_u_max(&self, u_max: f64) -> Result<Self> {
        Self::new(self.b_bar.clone(), u_max)
    }

    pub fn to_file(&self, lost: Option<Vec<usize>>) -> SystemFile {
        SystemFile { n: self.n(), u_max: self.u_max, b_bar: self.b_bar.to_rows(), lost }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file(None)).expect("system serializes")
    }
}

impl TryFrom<&SystemFile> for SystemSpec {
    type Error = Error;

    fn try_from(f: &SystemFile) -> Result<Self> {
        if f.n == 0 {
            return Err(Error::Validation { field: "n", reason: "must be at least 1".into() });
        }
        if f.b_bar.len() != f.n {
            return Err(Error::Validation {
                field: "b_bar",
                reason: format!("has {} rows, n = {}", f.b_bar.len(), f.n),
            });
        }
        let sys = SystemSpec::from_rows(&f.b_bar, f.u_max)?;
        if let Some(lost) = &f.lost {
            check_lost(lost, sys.num_inputs())?;
        }
        Ok(sys)
    }
}

/// Parses a system from its JSON text.
pub fn load_system(spec_text: &str) -> Result<SystemSpec> {
    load_system_file(spec_text).map(|(sys, _)| sys)
}

/// Parses a system plus its optional `lost` column list.
pub fn load_system_file(spec_text: &str) -> Result<(SystemSpec, Option<Vec<usize>>)> {
    let file: SystemFile = serde_json::from_str(spec_text)?;
    let sys = SystemSpec::try_from(&file)?;
    Ok((sys, file.lost))
}

/// True iff `B̄` has full row rank, which for a driftless plant with a
/// symmetric input box is equivalent to controllability.
pub fn is_controllable(sys: &SystemSpec) -> bool {
    is_controllable_with(sys, DEFAULT_RANK_TOL)
}

pub fn is_controllable_with(sys: &SystemSpec, rank_tol: f64) -> bool {
    sys.b_bar.rank(rank_tol) == sys.n()
}

/// `B̄ = [B C]` up to column order: `b` holds the kept columns and `c` the
/// columns whose actuators no longer obey commands.
#[derive(Debug, Clone, PartialEq)]
pub struct MalfunctionSplit {
    system: SystemSpec,
    lost: Vec<usize>,
    kept: Vec<usize>,
    b: Matrix,
    c: Matrix,
}

fn check_lost(lost: &[usize], num_inputs: usize) -> Result<()> {
    if lost.is_empty() {
        return Err(Error::Validation { field: "lost", reason: "at least one lost column is required".into() });
    }
    let mut seen = vec![false; num_inputs];
    for &j in lost {
        if j >= num_inputs {
            return Err(Error::Validation {
                field: "lost",
                reason: format!("column {j} out of range for {num_inputs} inputs"),
            });
        }
        if std::mem::replace(&mut seen[j], true) {
            return Err(Error::Validation { field: "lost", reason: format!("column {j} listed twice") });
        }
    }
    if lost.len() >= num_inputs {
        return Err(Error::InvalidSplit("no controlled columns would remain".into()));
    }
    Ok(())
}

/// Splits `sys` into controlled and lost columns. `lost` may be in any
/// order; it is stored sorted.
pub fn split(sys: &SystemSpec, lost: &[usize]) -> Result<MalfunctionSplit> {
    check_lost(lost, sys.num_inputs())?;
    let mut lost = lost.to_vec();
    lost.sort_unstable();
    let kept: Vec<usize> = (0..sys.num_inputs()).filter(|j| lost.binary_search(j).is_err()).collect();
    Ok(MalfunctionSplit {
        b: sys.b_bar.select_columns(&kept),
        c: sys.b_bar.select_columns(&lost),
        system: sys.clone(),
        lost,
        kept,
    })
}

impl MalfunctionSplit {
    pub fn system(&self) -> &SystemSpec {
        &self.system
    }

    pub fn lost(&self) -> &[usize] {
        &self.lost
    }

    pub fn kept(&self) -> &[usize] {
        &self.kept
    }

    /// Controlled columns `B` (n × m).
    pub fn b(&self) -> &Matrix {
        &self.b
    }

    /// Lost columns `C` (n × p).
    pub fn c(&self) -> &Matrix {
        &self.c
    }

    pub fn p(&self) -> usize {
        self.lost.len()
    }

    pub fn m(&self) -> usize {
        self.kept.len()
    }

    pub fn u_max(&self) -> f64 {
        self.system.u_max
    }

    /// Re-interleaves `B` and `C` into the original column order.
    pub fn merge(&self) -> Matrix {
        let n = self.system.n();
        let mut out = Matrix::zeros(n, self.system.num_inputs());
        for i in 0..n {
            for (k, &j) in self.kept.iter().enumerate() {
                out[(i, j)] = self.b[(i, k)];
            }
            for (k, &j) in self.lost.iter().enumerate() {
                out[(i, j)] = self.c[(i, k)];
            }
        }
        out
    }
}
