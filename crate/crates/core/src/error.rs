use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("vector must have at least one coordinate")]
    EmptyVector,

    #[error("non-finite value in input")]
    NonFinite,

    #[error("zero vector where a non-zero vector is required")]
    ZeroVector,

    #[error("norm {norm:e} outside the supported range [1e-150, 1e150]")]
    OutOfRange { norm: f64 },

    #[error("no inner product available for this norm")]
    NoInnerProduct,

    #[error("invalid norm specification: {0}")]
    InvalidNorm(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(
        "negative radicand {radicand:e} (scale {scale:e}): norm is not induced by an inner product"
    )]
    NegativeRadicand { radicand: f64, scale: f64 },

    #[error("vectors are linearly dependent")]
    LinearlyDependent,

    #[error(
        "quadrature did not reach tolerance: estimated error {achieved:e}, requested {requested:e}"
    )]
    QuadratureTolerance { achieved: f64, requested: f64 },

    #[error("outside the series convergence domain: {0}")]
    OutOfDomain(String),

    #[error("alpha_{p} is not a metric: distinct points {x:?} and {y:?} are at distance 0")]
    NotAMetric { p: f64, x: Vec<f64>, y: Vec<f64> },

    #[error("no witness found within the search budget: {0}")]
    WitnessNotFound(String),
}
