use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),
    #[error("edge refers to unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("vertex `{0}` has b=0")]
    ZeroSelfIntersection(String),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph is empty")]
    EmptyGraph,
    #[error("intersection matrix is not negative definite")]
    NotNegativeDefinite,
    #[error("degenerate branch profile {0:?}: zero denominator in the continued fraction")]
    DegenerateProfile(Vec<u32>),
    #[error("anti-ample perturbation failed: {0}")]
    Perturbation(String),
    #[error("tau = {0} < 1 (need at least two vertices)")]
    TauTooSmall(i64),
    #[error("coefficient of z at `{0}` is divisible by p")]
    ZNotCoprime(String),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("invalid cycle: {0}")]
    InvalidCycle(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("polynomial has a nonzero constant term")]
    ConstantTerm,
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
