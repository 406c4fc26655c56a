use thiserror::Error;

/// Errors raised by the tracking library.
///
/// Impossible multi-target configurations are not errors; they are encoded
/// as `f64::NEG_INFINITY` log-densities.
#[derive(Debug, Error)]
pub enum Error {
    #[error("order exceeds set size: requested order {order} for {len} values")]
    OrderExceedsSetSize { order: usize, len: usize },

    #[error("duplicate label {0}")]
    DuplicateLabel(crate::rfs::Label),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("time step must be positive, got {0}")]
    NonPositiveTimeStep(f64),

    #[error("matrix is not positive definite: {0}")]
    NotPositiveDefinite(&'static str),

    #[error("degenerate covariance in {0}")]
    DegenerateCovariance(&'static str),

    #[error("PHD intensity has zero mass")]
    ZeroMass,

    #[error("all cluster masses are zero but the cardinality puts mass on n > 0")]
    ZeroClusterMass,

    #[error("particle collapse at k={k}: every importance weight is zero")]
    ParticleCollapse { k: u32 },

    #[error("ragged input: run {run} has {got} steps, expected {expected}")]
    RaggedInput { run: usize, expected: usize, got: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("measurement has {got} cells but the grid has {expected}")]
    MeasurementSize { expected: usize, got: usize },

    #[error("schedule conflict: {0}")]
    Schedule(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors that come from bad user input rather than numerics.
    pub fn is_config_error(&self) -> bool {
        matches!(
            self,
            Error::Config(_)
                | Error::Schedule(_)
                | Error::NonPositiveTimeStep(_)
                | Error::Json(_)
                | Error::DimensionMismatch { .. }
                | Error::MeasurementSize { .. }
        )
    }
}
