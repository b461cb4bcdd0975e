use thiserror::Error;

/// Errors raised by the counting engine and the experiments built on it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CountError {
    #[error("domain size must be positive")]
    ZeroSize,
    #[error("expected {expected} assignments, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("image {target} of item {item} lies outside 1..={n}")]
    TargetOutOfRange { item: usize, target: usize, n: usize },
    #[error("target {target} has {preimages} preimages; a 2-max function allows at most 2")]
    NotTwoMax { target: usize, preimages: usize },
    #[error("collision count A = {0} must be even")]
    OddCollisionCount(usize),
    #[error("invalid multiplicity profile: {0}")]
    InvalidMultiplicities(String),
    #[error("size mismatch: permutation has {permutation} items, function has {function}")]
    SizeMismatch { permutation: usize, function: usize },
    #[error("not a permutation of 1..={0}")]
    NotAPermutation(usize),
    #[error("n = {n} exceeds the brute-force enumeration cap {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("invalid k = {k} for n = {n}: need 1 <= k <= n")]
    InvalidK { n: usize, k: usize },
    #[error("rejection sampling gave up after {attempts} attempts")]
    RejectionBudgetExceeded { attempts: usize },
    #[error("{n} items cannot be split equally among {s} targets")]
    NotDivisible { n: usize, s: usize },
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("counting methods disagree on {0}")]
    MethodDisagreement(String),
}

/// Errors raised by the graph pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("line {line}: {reason}")]
    MalformedLine { line: usize, reason: String },
    #[error("line {line}: index {index} out of range 0..{n}")]
    IndexOutOfRange { line: usize, index: usize, n: usize },
    #[error("duplicate edge (x{x}, y{y})")]
    DuplicateEdge { x: usize, y: usize },
    #[error("vertex {vertex} has degree {degree}, expected {expected}")]
    NotRegular {
        vertex: String,
        degree: usize,
        expected: usize,
    },
    #[error("degree {d} exceeds side size {n}")]
    DegreeTooLarge { n: usize, d: usize },
    #[error("rejection sampling gave up after {attempts} resamples")]
    RejectionBudgetExceeded { attempts: usize },
    #[error("graph has no perfect matching")]
    NoPerfectMatching,
    #[error("vertex {vertex} has odd degree {degree}")]
    OddDegree { vertex: String, degree: usize },
    #[error("expected a 4-regular graph, got degree {0}")]
    NotFourRegular(usize),
    #[error("path search exhausted its budget of {restarts} restarts")]
    BudgetExhausted { restarts: usize },
    #[error("matching edge (x{x}, y{y}) is already used by the path decomposition")]
    NotDisjoint { x: usize, y: usize },
    #[error("matching does not fit the graph: {0}")]
    InvalidMatching(String),
    #[error("invalid path decomposition: {0}")]
    InvalidDecomposition(String),
    #[error("expected a {expected}-regular graph, got degree {actual}")]
    WrongDegree { expected: usize, actual: usize },
    #[error("{0}")]
    InvalidArgument(String),
}
