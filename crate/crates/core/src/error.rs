//! Crate-wide error type.
//!
//! Errors fall into two classes that the CLI maps to distinct exit codes:
//! invalid input (exit code 2) and numerical failure on valid input
//! (exit code 3).

use thiserror::Error;

/// All errors produced by this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A sample (vector of observations) was empty where at least one value
    /// is required.
    #[error("empty sample")]
    EmptySample,

    /// A class has too few members for the requested estimate.
    #[error("degenerate class: class {class} has {size} member(s), need at least {needed}")]
    DegenerateClass {
        class: usize,
        size: usize,
        needed: usize,
    },

    /// A class is empty where members are required.
    #[error("empty class: class {0} has no members available")]
    EmptyClass(usize),

    /// A covariance matrix stayed singular even after ridge escalation.
    #[error("singular covariance: not positive definite after ridge escalation")]
    SingularCovariance,

    /// Per-class covariance estimation needs n_g >= d + 1 observations.
    #[error("class {class} too small for QDA: {size} member(s) in {dim} dimension(s), need at least {}", dim + 1)]
    ClassTooSmallForQda {
        class: usize,
        size: usize,
        dim: usize,
    },

    /// Farness calibration cannot proceed (for example, all values equal).
    #[error("degenerate farness distribution: {0}")]
    DegenerateFarness(String),

    /// Too few values for a robust fit.
    #[error("too few values: got {got}, need at least {needed}")]
    TooFewValues { got: usize, needed: usize },

    /// The neighborhood size k is outside 1..=n-1.
    #[error("invalid k: {k} not in 1..={max} for {n} objects", max = n.saturating_sub(1))]
    InvalidK { k: usize, n: usize },

    /// Structural problem in the provided input (labels, matrix shape, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A cell or row of a CSV file could not be parsed.
    #[error("csv error in {path} at line {line}, column {column}: {message}")]
    CsvData {
        path: String,
        line: u64,
        column: usize,
        message: String,
    },

    /// Any other CSV-level failure (I/O, malformed quoting, ...).
    #[error("csv error in {path}: {message}")]
    Csv { path: String, message: String },

    /// Iterative solver failed to reach its tolerance.
    #[error("solver did not converge: {0}")]
    NoConvergence(String),

    /// A computed quantity left its valid domain (for example a squared
    /// distance far below zero).
    #[error("numerical error: {0}")]
    Numeric(String),

    /// Underlying I/O failure.
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    /// JSON (de)serialization failure.
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code for the CLI: 2 for invalid input, 3 for numerical
    /// failure on structurally valid input.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::EmptySample
            | Error::DegenerateClass { .. }
            | Error::EmptyClass(_)
            | Error::ClassTooSmallForQda { .. }
            | Error::TooFewValues { .. }
            | Error::InvalidK { .. }
            | Error::InvalidInput(_)
            | Error::CsvData { .. }
            | Error::Csv { .. }
            | Error::Io { .. }
            | Error::Json(_) => 2,
            Error::SingularCovariance
            | Error::DegenerateFarness(_)
            | Error::NoConvergence(_)
            | Error::Numeric(_) => 3,
        }
    }
}
