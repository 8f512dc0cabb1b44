use thiserror::Error;

use crate::lp::LpError;

/// Errors raised by the resilience toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed system spec: {0}")]
    Parse(#[from] serde_json::Error),

    #[error("invalid field `{field}`: {reason}")]
    Validation { field: &'static str, reason: String },

    #[error("invalid lost-column set: {0}")]
    InvalidSplit(String),

    #[error("system is not controllable (rank {rank} < n = {n})")]
    NotControllable { rank: usize, n: usize },

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("disturbance component {index} = {value} exceeds the input bound {u_max}")]
    BoundViolation { index: usize, value: f64, u_max: f64 },

    #[error("{p} lost columns need 2^{p} vertex evaluations, above the cap of 2^{cap}")]
    VertexBudgetExceeded { p: usize, cap: usize },

    #[error("operation requires a single lost column, got {p}")]
    MultipleColumns { p: usize },

    #[error("lambda* + u_max is numerically zero")]
    DegenerateDenominator,

    #[error("the ray does not meet the translated polytope")]
    EmptyIntersection,

    #[error("point is not in the interior of the polytope")]
    NotInterior,

    #[error("sweep plane basis is not orthonormal")]
    NonOrthonormalPlane,

    #[error("orbital elements are singular: {0}")]
    SingularElements(String),

    #[error("inner polytope is not contained in the outer one")]
    ContainmentViolation,

    #[error(transparent)]
    Lp(#[from] LpError),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Short variant name, printed by the CLI next to the message.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse(_) => "ParseError",
            Error::Validation { .. } => "ValidationError",
            Error::InvalidSplit(_) => "InvalidSplit",
            Error::NotControllable { .. } => "NotControllable",
            Error::NumericalFailure(_) => "NumericalFailure",
            Error::BoundViolation { .. } => "BoundViolation",
            Error::VertexBudgetExceeded { .. } => "VertexBudgetExceeded",
            Error::MultipleColumns { .. } => "MultipleColumns",
            Error::DegenerateDenominator => "DegenerateDenominator",
            Error::EmptyIntersection => "EmptyIntersection",
            Error::NotInterior => "NotInterior",
            Error::NonOrthonormalPlane => "NonOrthonormalPlane",
            Error::SingularElements(_) => "SingularElements",
            Error::ContainmentViolation => "ContainmentViolation",
            Error::Lp(_) => "LpError",
            Error::Io(_) => "IoError",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
