use thiserror::Error;

use crate::povm::ValidationFailure;

/// Errors raised by the library's constructors and operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("vector norm {norm:e} is below the zero-norm guard")]
    ZeroNorm { norm: f64 },

    #[error("vector is not normalized (norm² = {norm_sq})")]
    NotNormalized { norm_sq: f64 },

    #[error("Bloch vector length {length} exceeds 1")]
    BlochOutOfBall { length: f64 },

    #[error("operator is not Hermitian (max |A - A†| = {defect:e})")]
    NotHermitian { defect: f64 },

    #[error("operator is not a projection (max |P² - P| = {defect:e})")]
    NotAProjection { defect: f64 },

    #[error("operator is not unitary (max |U†U - I| = {defect:e})")]
    NotUnitary { defect: f64 },

    #[error("not a density operator: {0}")]
    InvalidState(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid stochastic matrix: {0}")]
    InvalidStochasticMatrix(String),

    #[error("grouping is not a partition of the outcome labels: {0}")]
    NotAPartition(String),

    #[error("f² + g² = {norm_sq} > 1: no joint observable (min eigenvalue {min_eigenvalue:e})")]
    NotJointlyMeasurable { norm_sq: f64, min_eigenvalue: f64 },

    #[error("expected a two-outcome POVM, found {outcomes} outcomes")]
    NotTwoOutcome { outcomes: usize },

    #[error("POVM is not sharp")]
    NotSharp,

    #[error(transparent)]
    InvalidPovm(#[from] ValidationFailure),

    #[error("invalid orthonormal basis: {0}")]
    InvalidBasis(String),

    #[error("invalid measurement scheme: {0}")]
    InvalidScheme(String),

    #[error("closed form not available for experiment `{0}`")]
    UnsupportedExperiment(String),

    #[error("conditioning outcome has probability {probability:e}")]
    ZeroProbabilityCondition { probability: f64 },

    #[error("unknown label `{0}`")]
    UnknownLabel(String),

    #[error("invalid oracle configuration: {0}")]
    InvalidOracleConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
