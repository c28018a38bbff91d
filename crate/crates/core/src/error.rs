use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("variable count mismatch: expected {expected}, found {found}")]
    VariableMismatch { expected: usize, found: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("degree bound {bound} is below the polynomial degree {degree}")]
    DegreeBound { bound: u32, degree: u32 },
    #[error("denominator vanishes at the origin")]
    DenominatorVanishes,
    #[error("numerator must have at least one component")]
    EmptyNumerator,
    #[error("point is not in the open unit ball (norm {norm})")]
    NotInBall { norm: f64 },
    #[error("matrix is not unitary (deviation {deviation:e})")]
    NotUnitary { deviation: f64 },
    #[error("operation requires a ball target (l = 0), got l = {l}")]
    GeneralizedTarget { l: usize },
    #[error("maps have different denominators")]
    MixedDenominators,
    #[error("weight vector must have unit norm (norm² = {norm_sq})")]
    BadWeights { norm_sq: f64 },
    #[error("unknown catalog entry `{0}`")]
    UnknownCatalog(String),
    #[error("operation requires a polynomial map (constant denominator)")]
    NotPolynomial,
    #[error("too many variables for enumeration: n = {n}, limit {limit}")]
    TooManyVariables { n: usize, limit: usize },
    #[error("group closure exceeded cap of {cap} elements")]
    CapExceeded { cap: usize },
    #[error("not a permutation of 1..={n}: {detail}")]
    NotPermutation { n: usize, detail: String },
    #[error("map does not vanish at the origin ({what})")]
    NonzeroAtOrigin { what: String },
    #[error("form is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },
    #[error("could not make summand supports disjoint within {cap} steps")]
    DisjointnessUnreachable { cap: u32 },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}
