use thiserror::Error;

/// Errors produced by the engine.
///
/// Mathematical findings (a failed validation check, a failed identity, an
/// HLC failure) are *not* errors; they are reported through the report
/// types. Errors signal malformed input or a broken internal convention.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error in {context}: unexpected {token:?} at byte {position}")]
    Parse {
        context: &'static str,
        token: String,
        position: usize,
    },

    #[error("division by zero")]
    DivisionByZero,

    #[error("ambient dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: i64, found: i64 },

    #[error("model error: {0}")]
    Model(String),

    #[error("invalid almost-complex action: {0}")]
    InvalidJmap(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("internal consistency violation ({0}); this is a bug, not a property of the model")]
    InternalConsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
