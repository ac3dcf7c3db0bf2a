use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("residue {value} is out of range for modulus {modulus}")]
    ResidueOutOfRange { value: u64, modulus: u64 },
    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u64, right: u64 },
    #[error("operands live in different ambient arithmetics")]
    AmbientMismatch,
    #[error("quotient by a set contained in {{0}}")]
    EmptyDenominator,
    #[error("set too small: need at least {needed} elements, got {got}")]
    TooSmall { needed: usize, got: usize },
    #[error("{order} does not divide {modulus} - 1")]
    NotADivisor { order: u64, modulus: u64 },
    #[error("coset representative 0 is not in F_p*")]
    ZeroRep,
    #[error("shift alpha must be nonzero")]
    BadShift,
    #[error("ratio x must avoid 0 and 1")]
    BadRatio,
    #[error("degenerate input: {0}")]
    DegenerateInput(&'static str),
    #[error("plane normal vector is zero")]
    ZeroNormal,
    #[error("oracle budget exceeded: {estimated} tuples > {budget}")]
    BudgetExceeded { estimated: u128, budget: u128 },
    #[error("phi is not injective on A")]
    NotInjectiveOnA,
    #[error("phi is undefined on {0}")]
    PhiDomain(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
    #[error("unknown check id {0:?}")]
    UnknownCheck(String),
    #[error("malformed params: {0}")]
    MalformedParams(String),
    #[error("check {0} is not an estimate_constant check")]
    NotEstimateMode(&'static str),
    #[error("family produced no admissible instances")]
    NoAdmissibleInstances,
}
