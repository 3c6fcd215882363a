//! Error type shared by the whole crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong across kernels, schedules, estimators,
/// tail numerics and the experiment harness.
#[derive(Debug, Error)]
pub enum Error {
    /// A scalar or structural argument is outside its documented domain.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A point, grid or field does not have the expected dimension/length.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// Adaptive quadrature exhausted its subdivision budget above tolerance.
    #[error("quadrature did not converge: error estimate {achieved:.3e} above tolerance {requested:.3e}")]
    QuadratureNonConvergence { achieved: f64, requested: f64 },

    /// The Hankel moment system of a higher-order kernel build is singular.
    #[error("singular moment system while building higher-order kernel (pivot {pivot:.3e})")]
    SingularMomentSystem { pivot: f64 },

    /// An operation that needs data got none.
    #[error("empty sample: {0}")]
    EmptySample(&'static str),

    /// Requested miss level cannot be solved inside the tail-model domain.
    #[error("alpha {alpha:.6e} not reachable: tail bound at its domain edge is {edge_value:.6e}")]
    UnreachableAlpha { alpha: f64, edge_value: f64 },

    /// Envelope calibration needs spread-out deviations.
    #[error("degenerate deviations: {0}")]
    DegenerateDeviations(&'static str),

    /// Two grids/fields that must match do not.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// A CSV row failed to parse as an observation.
    #[error("csv parse error at line {line}: {message}")]
    CsvParse { line: u64, message: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Shorthand used by validators.
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
