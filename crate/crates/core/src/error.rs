use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("ambient dimension {0} outside the supported range 1..=16")]
    UnsupportedDimension(usize),

    #[error("basis index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("operand is not homogeneous of a single grade")]
    NotHomogeneous,

    #[error("grade mismatch: {0} vs {1}")]
    GradeMismatch(usize, usize),

    #[error("expected a grade-1 multivector")]
    NotAVector,

    #[error("metric is not symmetric positive-definite: {0}")]
    InvalidMetric(String),

    #[error("rank-deficient input: smallest singular value {sigma_min:.3e} below tolerance (largest {sigma_max:.3e})")]
    RankDeficient { sigma_min: f64, sigma_max: f64 },

    #[error("rank deficiency at point {point:?}: smallest singular value {sigma_min:.3e}")]
    RankDeficientAt { point: Vec<f64>, sigma_min: f64 },

    #[error("no uniform frame completion on the sample region; first failure at point {point:?} (shrink the region)")]
    RegionTooLarge { point: Vec<f64> },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("integration diverged at step {step}: state is no longer finite")]
    Diverged { step: usize },

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
