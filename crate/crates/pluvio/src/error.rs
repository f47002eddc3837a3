//! Crate-wide error type.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by parsing, fitting, sampling, and verification.
#[derive(Debug, Error)]
pub enum Error {
    /// A distribution parameter is outside its family's domain.
    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    /// A function argument is outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Malformed input data, reported with the offending line number.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// Too few observations for the requested procedure.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// A sample on which the requested model cannot be identified.
    #[error("degenerate sample: {0}")]
    DegenerateSample(String),

    /// An iterative procedure failed to converge.
    #[error("no convergence: {0}")]
    NonConvergence(String),

    /// Adaptive quadrature could not meet its tolerance. Carries the worst
    /// remaining subinterval for diagnosis.
    #[error(
        "quadrature did not converge: error {achieved:.3e} > tolerance {requested:.3e} \
         after {subdivisions} subdivisions; worst subinterval [{lo:.6e}, {hi:.6e}]"
    )]
    QuadratureNonConvergence {
        requested: f64,
        achieved: f64,
        lo: f64,
        hi: f64,
        subdivisions: usize,
    },

    /// I/O failure while reading input data.
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
