use thiserror::Error;

/// Errors raised anywhere in the elimination pipeline.
///
/// Variants split into two families that the CLI maps to different exit
/// codes: input problems (parse, arity, bad arguments) and mathematical or
/// genericity failures detected while computing.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero divisor")]
    ZeroDivisor,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("square family required")]
    SquareFamilyRequired,
    #[error("dimension {dim} exceeds configured cap {cap}")]
    DimensionCap { dim: usize, cap: usize },
    #[error("degenerate support family (empty toric variety)")]
    DegenerateSupports,
    #[error("lambda not separating")]
    LambdaNotSeparating,
    #[error("non-generic input: {0}")]
    NonGenericInput(String),
    #[error("singular Jacobian")]
    SingularJacobian,
    #[error("no valid approximant")]
    NoValidApproximant,
    #[error("mu not primitive for projection")]
    MuNotPrimitive,
    #[error("genericity failure after {attempts} attempts: {last}")]
    GenericityFailure { attempts: usize, last: String },
    #[error("non-unit series")]
    NonUnitSeries,
    #[error("series mismatch: {0}")]
    SeriesMismatch(String),
    #[error("residual check failed: {0}")]
    Residual(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse {
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("arity mismatch at line {line}: expected {expected} exponents, found {found}")]
    Arity {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("empty support")]
    EmptySupport,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// True for malformed input or usage, false for failures of the math.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. }
                | Error::Arity { .. }
                | Error::EmptySupport
                | Error::InvalidArgument(_)
        )
    }

    pub(crate) fn parse(line: usize, col: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            col,
            msg: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
