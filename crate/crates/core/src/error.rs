use thiserror::Error;

/// Errors raised by instance construction, oracles, and the exhaustive routines.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed instance or oracle parameters.
    #[error("configuration error: {0}")]
    Config(String),

    /// A caller referenced something the instance does not know about.
    #[error("usage error: {0}")]
    Usage(String),

    /// The oracle failed a structural check (normalization, monotonicity,
    /// submodularity) or a derived quantity fell outside its valid range.
    #[error("validation error: {0}")]
    Validation(String),

    /// A precondition of an operation does not hold for this instance.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// Exhaustive enumeration refused because the instance is too large.
    #[error("instance has {n} items; exhaustive routines accept at most {max}")]
    TooLarge { n: usize, max: usize },

    /// Argument outside the mathematical domain of a function.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("generation error: {0}")]
    Generation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
