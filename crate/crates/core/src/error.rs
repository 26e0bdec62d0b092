use num_bigint::BigInt;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("valuation of zero undefined")]
    ValuationOfZero,
    #[error("{0} is not prime")]
    NotPrime(BigInt),
    #[error("factorization budget exceeded, unfactored residue {residue}")]
    Unfactored { residue: BigInt },
    #[error("variable `{0}` is not declared")]
    UndeclaredVariable(String),
    #[error("polynomials are over different variable lists")]
    VariableMismatch,
    #[error("degenerate input: {0}")]
    Degenerate(&'static str),
    #[error("transvectant order r = {r} exceeds min({m}, {n})")]
    TransvectantOrder { r: u32, m: u32, n: u32 },
    #[error("polynomial is not homogeneous of order {0} in x, y")]
    NotHomogeneous(u32),
    #[error("singular matrix")]
    SingularMatrix,
    #[error("unsupported degree {0} (expected 2..=10)")]
    UnsupportedDegree(u32),
    #[error("symbolic mode unsupported for degree {0}; use concrete evaluation")]
    SymbolicUnsupported(u32),
    #[error("no invariant with index {index} for degree {degree}")]
    NoSuchInvariant { degree: u32, index: usize },
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: u32, found: u32 },
    #[error("coordinate {0} is not an integer")]
    NotInteger(String),
    #[error("scalar must be nonzero")]
    ZeroScalar,
    #[error("weight vectors differ")]
    WeightMismatch,
    #[error("invalid weighted point: {0}")]
    InvalidPoint(&'static str),
    #[error("globally unstable: the moduli point is zero, no semistable model exists")]
    GloballyUnstable,
    #[error("already semistable at {0}")]
    AlreadySemistable(BigInt),
    #[error("twist exponent {0} is not an integer; the twisted form lives over a ramified extension")]
    FractionalTwist(String),
    #[error("infeasible multiplicity pattern: {0}")]
    InfeasiblePattern(String),
    #[error("invariant system is malformed: {0}")]
    MalformedSystem(String),
    #[error("parse error: {0}")]
    Parse(String),
}
