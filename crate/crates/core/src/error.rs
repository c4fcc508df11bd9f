use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Rejected at construction: empty shape or a NaN/Inf entry.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch in {context}: expected {expected}, got {actual}")]
    DimensionMismatch {
        context: &'static str,
        expected: String,
        actual: String,
    },

    /// Operands live on different measure spaces.
    #[error("measure space mismatch in {0}")]
    SpaceMismatch(&'static str),

    #[error("operator is not Hermitian (asymmetry {asymmetry:e})")]
    NotHermitian { asymmetry: f64 },

    /// A required hypothesis (Parseval K-frame, duality, range
    /// inclusion, ...) does not hold for the supplied data.
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("infeasible request: {0}")]
    Infeasible(String),

    /// Coefficients do not satisfy the synthesis equation `Kf = T* c`.
    #[error("invalid coefficient family: residual {residual:e} exceeds {bound:e}")]
    InvalidCoefficients { residual: f64, bound: f64 },
}

pub(crate) fn mismatch(
    context: &'static str,
    expected: impl ToString,
    actual: impl ToString,
) -> Error {
    Error::DimensionMismatch {
        context,
        expected: expected.to_string(),
        actual: actual.to_string(),
    }
}
