use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// Two particles closer than the collision guard.
    #[error("collision: minimum pairwise gap {min_gap:e} is below the guard {guard:e}")]
    Collision { min_gap: f64, guard: f64 },

    /// Angles not strictly increasing, or outside [0, 2π].
    #[error("ordering violated at index {index}: {reason}")]
    Ordering { index: usize, reason: String },

    #[error("out of range: {0}")]
    Range(String),

    #[error("sample is empty")]
    EmptySample,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
