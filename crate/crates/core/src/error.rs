use thiserror::Error;

/// Every failure the library reports. Invariant failures carry a witness.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("prime mismatch: {0} vs {1}")]
    PrimeMismatch(u32, u32),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid descriptor: {0}")]
    InvalidDescriptor(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invariant failed ({check}): {witness}")]
    Invariant { check: String, witness: String },

    #[error("root finder did not converge after {iterations} iterations (last corrections: {log})")]
    NotConverged { iterations: usize, log: String },
}

impl Error {
    pub fn invariant(check: impl Into<String>, witness: impl Into<String>) -> Self {
        Error::Invariant {
            check: check.into(),
            witness: witness.into(),
        }
    }

    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::PrimeMismatch(..) => "prime_mismatch",
            Error::InvalidInput(_) => "invalid_input",
            Error::InvalidDescriptor(_) => "invalid_descriptor",
            Error::Unsupported(_) => "unsupported",
            Error::Invariant { .. } => "invariant",
            Error::NotConverged { .. } => "not_converged",
        }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Invariant { .. } => 3,
            Error::NotConverged { .. } => 4,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
