use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("characteristic-2 extensions are not supported (p = 2, k = {0})")]
    UnsupportedCharTwo(u32),
    #[error("field order {order} exceeds the cap {cap}")]
    FieldTooLarge { order: u64, cap: u64 },
    #[error("malformed field element: {0}")]
    BadElement(String),
    #[error("dimension {0} is not a supported prime power")]
    UnsupportedDimension(u64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("empty family")]
    EmptyFamily,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("matrix is not Hermitian (defect {0:e})")]
    NotHermitian(f64),
    #[error("eigensolver failed: {0}")]
    Eigen(String),
    #[error("path length {len} exceeds cap {cap}")]
    PathTooLong { len: usize, cap: usize },
    #[error("vertex {0} has no assignment")]
    UnassignedVertex(usize),
    #[error("vertex sets are disjoint")]
    DisjointPaths,
    #[error("brute-force cost {cost} exceeds guard {guard}")]
    CostGuard { cost: f64, guard: f64 },
    #[error("expected a real value, imaginary part {0:e}")]
    NotReal(f64),
    #[error("exact oracles disagree: {left} vs {right}")]
    OracleMismatch { left: f64, right: f64 },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
