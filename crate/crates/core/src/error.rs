use thiserror::Error;

use crate::sparsela::SolveReport;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("unsupported polynomial order {0} (supported: 1, 2)")]
    UnsupportedOrder(usize),

    #[error("space mismatch: {0}")]
    SpaceMismatch(String),

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("{stage} solve did not converge: {report}")]
    NotConverged {
        stage: &'static str,
        report: SolveReport,
    },

    #[error("invalid physical parameters: {0}")]
    InvalidParams(String),

    #[error("invalid time grid: {0}")]
    InvalidTimeGrid(String),

    #[error("norm of an empty sequence")]
    EmptySequence,

    #[error("convergence rate needs positive errors, got {coarse} and {fine}")]
    NonPositiveError { coarse: f64, fine: f64 },

    #[error("config line {line}: {message}")]
    ConfigParse { line: usize, message: String },

    #[error("invalid config: {0}")]
    ConfigInvalid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
