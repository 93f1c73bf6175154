use thiserror::Error;

/// Errors raised by the engine.
///
/// The three top-level classes map one-to-one onto the CLI exit codes:
/// input errors (1), resource caps (2) and theorem violations (3).
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FbrError {
    #[error("input error: {0}")]
    Input(String),

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("resource cap exceeded: {0}")]
    Resource(String),

    #[error("value is not integral at p = {p}")]
    NotIntegralAtP { p: u64 },

    #[error("theorem violation: {0}")]
    TheoremViolation(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl FbrError {
    pub fn input(msg: impl Into<String>) -> Self {
        FbrError::Input(msg.into())
    }

    pub fn resource(msg: impl Into<String>) -> Self {
        FbrError::Resource(msg.into())
    }

    pub fn theorem(msg: impl Into<String>) -> Self {
        FbrError::TheoremViolation(msg.into())
    }

    pub fn invariant(msg: impl Into<String>) -> Self {
        FbrError::Invariant(msg.into())
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            FbrError::Input(_) | FbrError::Parse { .. } | FbrError::NotIntegralAtP { .. } => 1,
            FbrError::Resource(_) => 2,
            FbrError::TheoremViolation(_) | FbrError::Invariant(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, FbrError>;
