//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on an argument was violated.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Two values that must live on the same measure space do not.
    #[error("measure space mismatch: {0}")]
    SpaceMismatch(String),

    /// An operator was applied to a function with the wrong Lp exponent.
    #[error("exponent mismatch: operator domain is L_{expected}, argument is L_{found}")]
    ExponentMismatch { expected: f64, found: f64 },

    /// An operator produced a non-finite value.
    #[error("numeric overflow: non-finite value at cell {cell}")]
    NumericOverflow { cell: usize },

    /// A derivative was requested where none exists.
    #[error("non-differentiable at cell {cell}: {reason}")]
    NonDifferentiable { cell: usize, reason: String },

    /// An exhaustive oracle was asked to run past its documented size cap.
    #[error("sample size {size} exceeds the oracle cap of {cap}")]
    SizeCap { size: usize, cap: usize },

    /// Degree estimation hit a vanishing image measure.
    #[error("degenerate degree: estimator value is zero at scale {rho}")]
    DegenerateDegree { rho: f64 },

    /// A condensing-rate denominator vanished.
    #[error("degenerate denominator: estimator value of the base set is zero at radius {radius}")]
    DegenerateDenominator { radius: f64 },

    /// A check that requires semi-homogeneity was given an operator that is not.
    #[error("operator is not semi-homogeneous: degree regression residual {residual} exceeds {limit}")]
    NotSemiHomogeneous { residual: f64, limit: f64 },

    /// Experiment configuration failed to parse or validate.
    #[error("configuration error: {0}")]
    Config(String),

    #[error("report error: {0}")]
    Report(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
