use thiserror::Error;

/// Errors raised by the simulator and its numerical kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("non-finite matrix entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("unknown subsystem label `{0}`")]
    UnknownLabel(String),

    #[error("invalid subsystem layout: {0}")]
    Layout(String),

    #[error("matrix is not Hermitian (max |A - A^dagger| = {0:e})")]
    NotHermitian(f64),

    #[error("matrix is not positive semi-definite (min eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("trace is {0} (expected 1)")]
    BadTrace(f64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("numerical error: {0}")]
    Numerical(String),

    #[error("operation requires the keep-correlations strategy")]
    Strategy,

    #[error("numerical drift after collision {collision}: {invariant} (value {value:e})")]
    NumericalDrift {
        collision: usize,
        invariant: &'static str,
        value: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
