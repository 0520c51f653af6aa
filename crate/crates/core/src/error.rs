use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("interval divisor contains zero")]
    DivisorContainsZero,
    #[error("interval endpoints out of order: [{lo}, {hi}]")]
    InvertedInterval { lo: String, hi: String },
    #[error("square root of negative value {0}")]
    NegativeSqrt(String),
    #[error("could not certify square-root bounds for {0}")]
    SqrtUncertified(String),
    #[error("non-finite float {0}")]
    NonFinite(String),
    #[error("cannot parse {0:?} as a rational number")]
    Parse(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("matrix has no entries")]
    Empty,
    #[error("floating-point singular value estimate unavailable")]
    EstimateUnavailable,
    #[error("could not certify {which} bound on the smallest singular value")]
    SigmaUncertified { which: &'static str },
    #[error(transparent)]
    Arith(#[from] ArithError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LcpError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("empty point list")]
    EmptyPointList,
    #[error("Lemke pivoting exceeded {0} steps")]
    Cycling(usize),
    #[error("ray termination on a problem that must be solvable")]
    UnexpectedRay,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("no simplices given")]
    NoSimplices,
    #[error("empty simplex in input")]
    EmptySimplex,
    #[error("vertex label {0:?} is not usable")]
    BadLabel(String),
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("vertex {vertex:?} has {got} coordinates, expected {expected}")]
    CoordinateCount {
        vertex: String,
        got: usize,
        expected: usize,
    },
    #[error("missing coordinates for vertex {0:?}")]
    MissingCoordinates(String),
    #[error("dimension must be positive")]
    ZeroDimension,
    #[error("no desired squared length for edge ({0}, {1})")]
    MissingLength(String, String),
    #[error("desired squared length for ({0}, {1}) must be positive")]
    NonPositiveLength(String, String),
    #[error("({0}, {1}) is not an edge of the complex")]
    NotAnEdge(String, String),
    #[error(transparent)]
    Lcp(#[from] LcpError),
}

#[derive(Debug, Clone, Error)]
pub enum EmbedError {
    #[error("invalid embedding configuration: {0}")]
    Config(String),
    #[error("gave up after {attempts} attempts; last attempt was heuristically self-intersecting")]
    RestartsExhausted {
        attempts: usize,
        last: Box<crate::complex::Realization>,
    },
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}
