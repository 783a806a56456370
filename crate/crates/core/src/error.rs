use thiserror::Error;

/// Errors raised by the engine.
///
/// The CLI maps these onto its exit-code contract: parse/input problems are
/// exit 1, mathematical precondition failures are exit 2.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("negative exponent at position {0}")]
    NegativeExponent(usize),

    #[error("vector field is not tangent: X(f) is not divisible by f (remainder {remainder})")]
    NotTangent { remainder: String },

    #[error(
        "quotient algebra is infinite-dimensional (singularity is not algebraically isolated)"
    )]
    InfiniteDimensional,

    #[error("ideal contains a unit; the quotient algebra is trivial")]
    UnitIdeal,

    #[error("socle has dimension {0}, expected 1 (algebra is not Gorenstein)")]
    NotGorenstein(usize),

    #[error("radical of the bilinear form differs from the annihilator ideal")]
    RadicalMismatch,

    #[error("functional is undefined: the designated socle element reduces to zero")]
    SocleZero,

    #[error("element does not lie in the image of the requested ideal power")]
    NotDivisible,

    #[error("resource budget exceeded after {0} reduction steps")]
    BudgetExceeded(usize),

    #[error("vector field vanishes on the box boundary at {0}")]
    BoundaryZero(String),

    #[error("curve tracing failed: {0}")]
    TracingFailure(String),

    #[error("fiber does not meet the disk boundary transversally: {0}")]
    NonTransversalBoundary(String),

    #[error("parity error: {0}")]
    Parity(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors that signal a violated mathematical precondition
    /// rather than malformed input.
    pub fn is_math_failure(&self) -> bool {
        !matches!(
            self,
            Error::Parse { .. }
                | Error::UnknownVariable(_)
                | Error::NegativeExponent(_)
                | Error::Invalid(_)
        )
    }
}
