use thiserror::Error;

/// Errors raised by the credal engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty input: {0}")]
    Empty(&'static str),
    #[error("weight {weight} at index {index} is negative")]
    NegativeWeight { index: usize, weight: f64 },
    #[error("weights sum to {sum}, not 1")]
    NotNormalized { sum: f64 },
    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("index {index} out of range for size {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("duplicate outcome label {0:?}")]
    DuplicateLabel(String),
    #[error("expectation chain violated: {0}")]
    ChainViolation(String),
    #[error("exponents p={p}, q={q} are not Hölder conjugates")]
    BadExponents { p: f64, q: f64 },
    #[error("function is not positive at threshold {at}")]
    NonPositiveF { at: f64 },
    #[error("function not admissible: {0}")]
    InadmissibleFunction(String),
    #[error("oracle needs {terms} terms at horizon {horizon}, limits are {max_terms} terms / horizon {max_horizon}")]
    OracleTooLarge {
        horizon: usize,
        terms: u128,
        max_horizon: usize,
        max_terms: u128,
    },
    #[error("empty grid")]
    EmptyGrid,
    #[error("ramp width {0} must be positive")]
    NonPositiveWidth(f64),
    #[error("function takes negative value {value} at {at}")]
    NegativeFunctionValue { at: f64, value: f64 },
    #[error("past-coordinate function g is negative at assignment {0:?}")]
    NegativeG(Vec<f64>),
    #[error("parameter p={0} out of range")]
    POutOfRange(f64),
    #[error("maps do not share one monotonicity")]
    MixedMonotonicity,
    #[error("beta={beta} outside ({lo}, {hi})")]
    BetaOutOfRange { beta: f64, lo: f64, hi: f64 },
    #[error("alpha={0} out of range")]
    AlphaOutOfRange(f64),
    #[error("index 0 makes log(i+1) vanish")]
    DegenerateLog,
    #[error("length mismatch: need at least {needed}, got {got}")]
    LengthMismatch { needed: usize, got: usize },
    #[error("bad strategy parameter: {0}")]
    BadStrategyParam(String),
    #[error("schedule invalid: {0}")]
    ScheduleInvalid(String),
    #[error("sup over (-inf, 0] of {0} is unbounded")]
    UnboundedPhi(String),
    #[error("model is not a rectangular product")]
    NotRectangular,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
