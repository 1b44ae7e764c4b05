use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("interior product of a degree-0 form")]
    InteriorOfFunction,

    #[error("{0} must have constant coefficients")]
    NonConstant(&'static str),

    #[error("metric is degenerate")]
    DegenerateMetric,

    #[error("metric is not positive definite")]
    NotPositiveDefinite,

    #[error("volume factor sqrt({0}) is not rational")]
    IrrationalVolume(String),

    #[error("dimension {0} is not of the form 4n+3")]
    NotFourNPlusThree(usize),

    #[error("deformation parameter must be positive, got {0}")]
    NonPositiveParameter(String),

    #[error("monodromy not finite order within bound {0}")]
    OrderBoundExceeded(usize),

    #[error("non-compact model space has no finite harmonic table")]
    NonCompact,

    #[error("not a hyper-Kähler isometry: {0}")]
    NotHyperKahlerIsometry(String),

    #[error("structure is not almost contact metric: {0}")]
    NotAlmostContactMetric(String),

    #[error("inconsistent model: {0}")]
    Inconsistent(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
