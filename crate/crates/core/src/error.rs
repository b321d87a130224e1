use thiserror::Error;

/// Errors produced by curve, persistence and reconstruction routines.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum CurveSigError {
    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    #[error("degenerate curve: edge {edge} has zero length")]
    DegenerateCurve { edge: usize },

    #[error("invalid query: {0}")]
    InvalidQuery(String),

    #[error("essential class mismatch: {left} vs {right}")]
    EssentialMismatch { left: usize, right: usize },

    #[error("rejection sampling exhausted after {attempts} attempts (seed {seed})")]
    RejectionExhausted { attempts: usize, seed: u64 },

    #[error("no correspondence: vertex {vertex} is {distance:e} from the other image")]
    NoCorrespondence { vertex: usize, distance: f64 },

    #[error("assembled map is not monotone: {0}")]
    NotMonotone(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, CurveSigError>;
