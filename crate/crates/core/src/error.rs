use std::fmt;

use thiserror::Error;

/// One problem found while validating raw panel data.
#[derive(Debug, Clone, PartialEq)]
pub enum PanelIssue {
    Empty,
    LengthMismatch { psi: usize, eta: usize },
    OutOfRange { field: &'static str, index: usize, value: f64 },
    PriorOutOfRange(f64),
}

impl fmt::Display for PanelIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PanelIssue::Empty => write!(f, "panel has no experts"),
            PanelIssue::LengthMismatch { psi, eta } => {
                write!(f, "psi has {psi} entries but eta has {eta}")
            }
            PanelIssue::OutOfRange { field, index, value } => {
                write!(f, "{field}[{index}] = {value} is outside [0, 1]")
            }
            PanelIssue::PriorOutOfRange(v) => write!(f, "p_y = {v} is outside (0, 1)"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid panel: {}", join_issues(.0))]
    InvalidPanel(Vec<PanelIssue>),

    #[error("probability vector entry {index} = {value} is outside [0, 1]")]
    InvalidProbability { index: usize, value: f64 },

    #[error("probability vector is empty")]
    EmptyVector,

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("{n} coordinates exceed the enumeration limit of {n_max}; use Monte Carlo estimation")]
    TooManyExperts { n: usize, n_max: usize },

    #[error("bit-vector at index {index} has length {got}, expected {expected}")]
    BitLength { index: usize, expected: usize, got: usize },

    #[error("invalid bit string {0:?}: only '0' and '1' are allowed")]
    InvalidBits(String),

    #[error("clamp epsilon {0} must lie in (0, 1e-3]")]
    InvalidClamp(f64),

    #[error("panel is not symmetric: psi[{index}] != eta[{index}]")]
    NotSymmetric { index: usize },

    #[error("parameter {index} = {value} lies on the boundary of [0, 1]; log-odds weights are undefined")]
    BoundaryParameter { index: usize, value: f64 },

    #[error("grid value {0} must lie strictly inside (0, 1)")]
    InvalidGrid(f64),

    #[error("trial count must be at least 1")]
    NoTrials,

    #[error("norm order must be 1, 2 or infinity")]
    UnsupportedNorm,

    #[error("malformed panel file: {0}")]
    Json(#[from] serde_json::Error),
}

fn join_issues(issues: &[PanelIssue]) -> String {
    issues.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

pub type Result<T> = std::result::Result<T, Error>;
