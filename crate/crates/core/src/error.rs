use thiserror::Error;

/// Errors produced by the symbolic engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable lists differ: {left:?} vs {right:?}")]
    VariableMismatch { left: Vec<String>, right: Vec<String> },

    #[error("variable index {index} out of range for {len} variables")]
    VariableIndex { index: usize, len: usize },

    #[error("polynomial parse error at column {column}: {message}")]
    Parse { column: usize, message: String },

    #[error("side mismatch: {0}")]
    SideMismatch(String),

    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),

    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },

    #[error("volume coefficient must be nonzero")]
    ZeroVolume,

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("algebroid axioms fail: {0}")]
    Validation(String),

    #[error("bivector is not Poisson: [pi,pi] = {0}")]
    NotPoisson(String),

    #[error("connection has torsion on frame pair ({i},{j})")]
    Torsion { i: usize, j: usize },

    #[error("d^2 does not vanish on coordinate {0}")]
    DifferentialNotClosed(String),

    #[error("operator raises weight by {0}; no capped subcomplex exists")]
    WeightRaising(i64),

    #[error("operator does not square to zero: {0}")]
    NotAComplex(String),

    #[error("{0}")]
    Document(String),
}

pub type Result<T> = std::result::Result<T, Error>;
