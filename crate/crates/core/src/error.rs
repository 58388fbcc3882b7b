use thiserror::Error;

/// Errors raised by the operator calculus and its front ends.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max asymmetry {asymmetry:e})")]
    NotHermitian { asymmetry: f64 },
    #[error("matrix is not positive semidefinite (eigenvalue {eigenvalue:e})")]
    NotPsd { eigenvalue: f64 },
    #[error("{routine} did not converge within {iterations} iterations")]
    NoConvergence { routine: &'static str, iterations: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },
    #[error("operator does not admit an A-adjoint (range defect {defect:e})")]
    NotAdmissible { defect: f64 },
    #[error("empty block list")]
    EmptyList,
    #[error("centre blocks differ: cross-diagonal matrices of odd order need T_c = S_c")]
    CenterConflict,
    #[error("matrix polynomial degree {0} is below 2")]
    DegreeTooSmall(usize),
    #[error("norm argument must be nonnegative, got {0}")]
    NegativeNorm(f64),
    #[error("rank {rank} outside 0..={dim}")]
    BadRank { rank: usize, dim: usize },
    #[error("unknown check `{0}`")]
    UnknownCheck(String),
    #[error("check `{id}` cannot be instantiated: {reason}")]
    HypothesisViolation { id: String, reason: String },
    #[error("malformed input: {0}")]
    Parse(String),
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn dim_mismatch(expected: impl ToString, found: impl ToString) -> Error {
    Error::DimensionMismatch {
        expected: expected.to_string(),
        found: found.to_string(),
    }
}
