use thiserror::Error;

/// Errors produced by the correlation engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoreError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: String, got: String },

    #[error("matrix is not Hermitian (max |M - M^dagger| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("not a valid density matrix: {reason}")]
    NotAState { reason: String },

    #[error("invalid probability distribution: {0}")]
    Distribution(String),

    #[error("parameter out of range: {0}")]
    Parameter(String),

    #[error("measurement axes are not complementary: |n1 . n2| = {overlap:e}")]
    Complementarity { overlap: f64 },

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("closed-form argument outside its domain: {0}")]
    FormulaDomain(String),
}

impl CoreError {
    pub(crate) fn not_a_state(reason: impl Into<String>) -> Self {
        CoreError::NotAState { reason: reason.into() }
    }

    pub(crate) fn parameter(msg: impl Into<String>) -> Self {
        CoreError::Parameter(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, CoreError>;
