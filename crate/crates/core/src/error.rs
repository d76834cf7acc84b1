use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cyclotomic order must be positive")]
    InvalidOrder,
    #[error("exponent {exponent} is not a unit modulo {order}: not an embedding")]
    NotAnEmbedding { exponent: i64, order: u32 },
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("order mismatch: entries over Q(zeta_{found}) do not lie in Q(zeta_{expected})")]
    OrderMismatch { expected: u32, found: u32 },
    #[error("duplicate puncture {0}")]
    DuplicatePuncture(String),
    #[error("unknown puncture {0}")]
    UnknownPuncture(String),
    #[error("matrix is not quasi-unipotent of order dividing {order}; try a larger N")]
    NotQuasiUnipotent { order: u32 },
    #[error("rank-one scalar must be nonzero")]
    ZeroScalar,
    #[error("twist has {found} scalars but the tuple has {expected} finite punctures")]
    PunctureMismatch { expected: usize, found: usize },
    #[error("middle convolution parameter must be nonzero")]
    ZeroLambda,
    #[error("family index must be non-negative, got {0}")]
    NegativeIndex(i64),
    #[error("tuple is not rigid (rigidity index {0})")]
    NotRigid(i64),
    #[error("tuple is not absolutely irreducible")]
    NotIrreducible,
    #[error("tuple already has rank one")]
    AlreadyRankOne,
    #[error("reduction step did not lower the rank (rank {0})")]
    NoProgress(usize),
    #[error("middle convolution produced the zero local system")]
    ZeroRank,
    #[error("parameter lists must be nonempty and of equal length")]
    EmptyParameters,
    #[error("{0} is not a root of unity of the required order")]
    NotRootOfUnity(String),
    #[error("multiplicity function has empty support")]
    EmptySupport,
    #[error("invalid multiplicity function: {0}")]
    InvalidMultiplicity(String),
    #[error("polynomial has zero constant term")]
    ZeroConstantTerm,
    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),
    #[error("root finding did not reach the certified bound at {0} bits")]
    RootFindingFailure(usize),
    #[error("tolerance must be a positive finite number, got {0}")]
    InvalidTolerance(String),
    #[error("Hodge multiset must be nonempty")]
    EmptyHodge,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
