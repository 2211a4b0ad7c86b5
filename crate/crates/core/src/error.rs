use thiserror::Error;

/// Errors surfaced by the engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid complex: {0}")]
    InvalidComplex(String),

    #[error("unknown simplex: {0}")]
    UnknownSimplex(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("differentials do not compose to zero in degree {0}")]
    NotAComplex(usize),

    #[error("chain is not a cycle: {0}")]
    NotACycle(String),

    #[error("construction obstructed: {0}")]
    Obstructed(String),

    #[error("linear system inconsistent: {0}")]
    Inconsistent(String),

    #[error("wrong word kind: expected {expected}, got {got}")]
    WordKind {
        expected: &'static str,
        got: &'static str,
    },

    #[error("quasi-isomorphism precondition failed: {0}")]
    NotQuasiIso(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
