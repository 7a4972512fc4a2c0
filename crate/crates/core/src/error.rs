use thiserror::Error;

/// Errors raised by the library. Every variant corresponds to an invalid
/// input or a violated precondition; refuted contracts are reported as data,
/// not as errors.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension must be at least {min}, got {found}")]
    DimensionTooSmall { min: usize, found: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("point {index} lies outside the open unit ball (|z| = {norm})")]
    OutsideBall { index: usize, norm: f64 },

    #[error("matrix is not Hermitian (max asymmetry {defect:e})")]
    NotHermitian { defect: f64 },

    #[error("matrix order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("polynomial has nonzero constant term {re}+{im}i")]
    NonzeroConstantTerm { re: f64, im: f64 },

    #[error("kernel normalizer vanishes at point {index}")]
    VanishingNormalizer { index: usize },

    #[error("degree budget exceeded: need {needed}, form supports {available}")]
    DegreeBudget { needed: usize, available: usize },

    #[error("norm mismatch {left} vs {right} exceeds tolerance")]
    NormMismatch { left: f64, right: f64 },

    #[error("zero polynomial where a nonzero one is required")]
    ZeroInput,

    #[error("weight kind `{0}` has no evaluable density")]
    NonEvaluableWeight(&'static str),

    #[error("moment index {index} not tabulated (have {available})")]
    MomentOutOfRange { index: usize, available: usize },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
