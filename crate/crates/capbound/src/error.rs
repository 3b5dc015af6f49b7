//! Crate-wide error type.
//!
//! Contract violations (bad parameters, broken preconditions, exceeded search
//! caps) are kept apart from internal failures (I/O, serialization, falsified
//! self-checks) so the CLI can map them to distinct exit codes.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument is outside its documented domain.
    #[error("invalid parameter `{name}`: {reason}")]
    Parameter { name: &'static str, reason: String },

    /// A stated precondition does not hold; the message carries the violated
    /// inequality verbatim, e.g. "n > 2/eps^2 required (n = 10, 2/eps^2 = 200)".
    #[error("precondition violated: {requirement}")]
    Precondition { requirement: String },

    #[error("label {label} out of range 1..={num_classes}")]
    LabelOutOfRange { label: usize, num_classes: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("distance matrix is not symmetric at ({row},{col})")]
    AsymmetricMatrix { row: usize, col: usize },

    /// An exhaustive search was requested above its configured size cap.
    #[error("{what}: size {actual} exceeds cap {limit}")]
    CapExceeded {
        what: &'static str,
        limit: usize,
        actual: usize,
    },

    #[error("geometry mismatch: {0}")]
    GeometryMismatch(String),

    #[error("2*a_n = {twice_a} must divide n = {n}")]
    Divisibility { n: usize, twice_a: usize },

    /// An internal consistency suite found a counterexample. This falsifies
    /// the implementation, never the mathematics, and is treated as fatal.
    #[error("suite `{suite}` violated on case {case}: {detail}")]
    SuiteViolation {
        suite: String,
        case: u64,
        detail: String,
    },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// CLI exit code: 2 for contract violations, 1 for internal failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parameter { .. }
            | Error::Precondition { .. }
            | Error::LabelOutOfRange { .. }
            | Error::LengthMismatch { .. }
            | Error::AsymmetricMatrix { .. }
            | Error::CapExceeded { .. }
            | Error::GeometryMismatch(_)
            | Error::Divisibility { .. }
            | Error::Config(_) => 2,
            Error::SuiteViolation { .. } | Error::Io(_) | Error::Json(_) => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Shorthand for parameter errors.
pub(crate) fn param_err<T>(name: &'static str, reason: impl Into<String>) -> Result<T> {
    Err(Error::Parameter {
        name,
        reason: reason.into(),
    })
}

/// Shorthand for precondition errors.
pub(crate) fn precondition<T>(requirement: impl Into<String>) -> Result<T> {
    Err(Error::Precondition {
        requirement: requirement.into(),
    })
}
