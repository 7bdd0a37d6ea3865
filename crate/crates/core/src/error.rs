use thiserror::Error;

/// Failures raised by evs operations. Axiom violations and false verdicts are
/// not errors; they are reported as findings inside the returned reports.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvsError {
    /// Malformed input: bad parameters, inconsistent tables, unknown elements.
    #[error("input error: {0}")]
    Input(String),
    /// A document failed to load; `path` locates the offending field.
    #[error("{path}: {message}")]
    Document { path: String, message: String },
    /// An operation was applied outside its domain (e.g. `L(x)` for primitive `x`).
    #[error("domain error: {0}")]
    Domain(String),
    /// No decision procedure is available (missing oracle, exhausted budget).
    #[error("undecided: {0}")]
    Undecided(String),
    /// The instance is not an evs in a way that blocks the operation.
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    /// A verification that a theorem guarantees did not go through.
    #[error("internal finding: {0}")]
    Internal(String),
}

impl EvsError {
    pub fn doc(path: impl Into<String>, message: impl Into<String>) -> Self {
        EvsError::Document {
            path: path.into(),
            message: message.into(),
        }
    }
}

pub type Result<T, E = EvsError> = std::result::Result<T, E>;
