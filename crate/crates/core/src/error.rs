use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("expected {expected} components, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("a filtered complex needs at least one function component")]
    NoComponents,

    #[error("simplex references vertex {vertex}, but only {count} vertices have values")]
    DanglingVertex { vertex: usize, count: usize },

    #[error("vertex {0} appears twice in one simplex")]
    DuplicateVertex(usize),

    #[error("a simplex needs at least one vertex")]
    EmptySimplex,

    #[error("vertex {vertex} has a non-finite value")]
    NonFiniteValue { vertex: usize },

    #[error("simplex {0} is not part of the complex")]
    SimplexNotInComplex(String),

    #[error("simplex list is not closed under taking faces: {0} is missing")]
    NotFaceClosed(String),

    #[error("simplex {0} of the smaller complex is missing from the larger one")]
    NotASubcomplex(String),

    #[error("{0} is not a prime modulus")]
    NotPrime(u32),

    #[error("point is not in the open region u < v (componentwise)")]
    NotInDeltaPlus,

    #[error("epsilon {eps} is invalid for this query: {reason}")]
    InvalidEpsilon { eps: f64, reason: &'static str },

    #[error("direction component {index} is {value}; all components must be positive")]
    NonPositiveDirection { index: usize, value: f64 },

    #[error("cone height {height} must exceed the maximum function value {max}")]
    ConeTooLow { height: f64, max: f64 },

    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("{points} off-diagonal points exceed the brute-force limit of {limit}")]
    TooManyPoints { points: usize, limit: usize },

    #[error("no admissible pairs to sample")]
    EmptySample,

    #[error("the two functions are defined on different complexes")]
    StructureMismatch,

    #[error("expected a scalar function, found {0} components")]
    NotScalar(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("I/O error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
