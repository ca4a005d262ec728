use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("valuation of zero undefined")]
    ValuationOfZero,

    #[error("modulus must be at least 2, got {0}")]
    ModulusTooSmall(String),

    #[error("not a unit: {value} is divisible by {prime}")]
    NotAUnit { value: String, prime: u64 },

    #[error("{0} is not prime")]
    NotPrime(String),

    #[error("{0} exceeds the deterministic primality bound")]
    PrimeTooLarge(String),

    #[error("the prime 2 is not allowed here")]
    EvenPrime,

    #[error("prime {0} is outside the supported range")]
    UnsupportedPrime(u64),

    #[error("not a solution")]
    NotASolution,

    #[error("not primitive (content {0})")]
    NotPrimitive(String),

    #[error("parity violation: a and c must be odd")]
    ParityViolation,

    #[error("zero entry: a, b and c must be nonzero")]
    ZeroEntry,

    #[error("alpha = {alpha} out of range for p = {p}")]
    AlphaOutOfRange { alpha: u32, p: u64 },

    #[error("not a Frey triple: {0}")]
    NotFreyTriple(&'static str),

    #[error("singular model (discriminant zero)")]
    SingularModel,

    #[error("factorization bound exceeded: cofactor {cofactor} remains after trial division to {bound}")]
    FactorizationBoundExceeded { cofactor: String, bound: u64 },

    #[error("bad reduction at {0}")]
    BadReduction(u64),

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
