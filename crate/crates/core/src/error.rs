use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("reciprocal of zero")]
    ZeroReciprocal,
    #[error("negative value {0} is outside [0, inf]")]
    NegativeValue(String),
    #[error("{0} is not a prime below 2^31")]
    NotPrime(u64),
    #[error("operands live over different coefficient fields")]
    FieldMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} has no image in the coefficient field")]
    NotInField(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial does not vanish at the origin")]
    NotCentered,
    #[error("tangent cone is not a power of a single linear form over the base field")]
    NotUnibranchTangentCone,
    #[error("not a Weierstrass polynomial in y")]
    NotWeierstrass,
    #[error("polynomial is not monic in y")]
    NotMonic,
    #[error("key polynomial sequence must start with x, y")]
    ViolatesS1,
    #[error("value relation fails at index {index}")]
    ViolatesS2 { index: usize },
    #[error("key polynomial {index} is not U^n - theta*monomial")]
    ViolatesS3 { index: usize },
    #[error("claimed n at index {index} is not minimal")]
    NonMinimalN { index: usize },
    #[error("exponent vector at index {index} is out of range")]
    ExponentOutOfRange { index: usize },
    #[error("malformed key polynomial sequence: {0}")]
    MalformedSkp(String),
    #[error("input is reducible: {0}")]
    ReducibleInput(String),
    #[error("leading resultant coefficient has several roots in theta")]
    MultipleRoots,
    #[error("valuation or curve is not in normalized form")]
    NotNormalized,
    #[error("smooth branch (order 1); pass allow-smooth to evaluate the formula anyway")]
    SmoothBranch,
    #[error("internal mismatch: {0}")]
    InternalMismatch(String),
    #[error("segment is degenerate (valuation is ord_m)")]
    DegenerateSegment,
    #[error("skewness {0} is outside the segment")]
    OutOfSegment(String),
    #[error("index {index} out of range")]
    IndexOutOfRange { index: usize },
    #[error("linear programming bound violated: {0}")]
    LemmaViolated(String),
    #[error("divisors {0} and {1} do not meet in the current model")]
    NotAdjacent(usize, usize),
    #[error("point on divisor {0} is not available for a free blow-up")]
    PointUnavailable(usize),
    #[error("Farey weight disagrees with chart computation: {0}")]
    FareyMismatch(String),
    #[error("blow-up center needs a tangent direction outside the base field")]
    FieldRootNeeded,
    #[error("curve is not square-free")]
    NonSquareFree,
    #[error("resolution did not finish within {0} blow-ups")]
    TooManyBlowups(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
