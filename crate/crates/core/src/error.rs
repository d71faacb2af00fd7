use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("empty point: dimension must be at least 1")]
    EmptyPoint,

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("magnitude exceeds {limit:e} in {what}")]
    OutOfRange { what: &'static str, limit: f64 },

    #[error("interval inverted at {index}: lo={lo} > hi={hi}")]
    InvertedInterval { index: String, lo: f64, hi: f64 },

    #[error("matrix is not symmetric at ({i},{j})")]
    Asymmetric { i: usize, j: usize },

    #[error("negative constant at {index}: {value}")]
    NegativeConstant { index: String, value: f64 },

    #[error("parameter out of domain: {0}")]
    Domain(String),

    #[error("non-finite evaluation at {point:?}")]
    Evaluation { point: Vec<f64> },

    #[error("function model has no {0} evaluator")]
    MissingDerivative(&'static str),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
}
