use thiserror::Error;

/// Errors surfaced by the library. Anything tagged "invariant violation"
/// signals an internal bug (a verified identity failed), not bad input.
#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus must be at least 2, got {0}")]
    InvalidModulus(u64),
    #[error("dimension must be at least {min}, got {got}")]
    InvalidDimension { min: u32, got: u32 },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u64, right: u64 },
    #[error("moduli {left} and {right} are not coprime")]
    NotCoprime { left: u64, right: u64 },
    #[error("vector has content {content}; a projective representative needs content 1")]
    NotProjective { content: u64 },
    #[error("index {index} out of range for size {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("the two primes must be distinct, both are {0}")]
    PrimesEqual(u64),
    #[error("weight mismatch: expected {expected}, got {got}")]
    WeightMismatch { expected: u64, got: u64 },
    #[error("x = {x} is outside the feasible range [{min}, {max}]")]
    XOutOfRange { x: u64, min: u64, max: u64 },
    #[error("occupancy vector is not monotone nonincreasing at position {0}")]
    NotMonotone(usize),
    #[error("occupancy entry {value} exceeds cap {cap}")]
    CapExceeded { value: u64, cap: u64 },
    #[error("point {index} has no private neighbor")]
    NoPrivateNeighbor { index: usize },
    #[error("pair {index} has type ({s}, {t}), expected ({want_s}, {want_t})")]
    WrongType {
        index: usize,
        s: u64,
        t: u64,
        want_s: u64,
        want_t: u64,
    },
    #[error("type reduction needs a squarefree two-prime modulus, got {0}")]
    NotSemiprime(u64),
    #[error("set system conversion requires T = {{0}}")]
    SetSystemUnsupported,
    #[error("pair ({i}, {j}) violates the matching conditions with value {value}")]
    FamilyViolation { i: usize, j: usize, value: u64 },
    #[error("cross-product set entry {value} is outside 1..{m}")]
    InvalidCrossSet { value: u64, m: u64 },
    #[error("simple construction needs m <= n, got m = {m}, n = {n}")]
    ConstructionRange { m: u64, n: u32 },
    #[error("search space of {required} candidates exceeds the limit {limit}")]
    LimitExceeded { required: u64, limit: u64 },
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
    #[error("invariant violation (implementation bug): {0}")]
    InvariantViolation(String),
    #[error("eigenbasis mismatch in block {block} at ({row}, {col})")]
    EigenMismatch {
        block: usize,
        row: usize,
        col: usize,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
