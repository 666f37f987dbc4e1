use thiserror::Error;

/// Errors raised by construction and operation preconditions.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid graphon: {0}")]
    InvalidGraphon(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid interval set: {0}")]
    InvalidIntervalSet(String),

    #[error("invalid sampling set: {0}")]
    InvalidSamplingSet(String),

    #[error("coordinate {value} outside [0,1]")]
    OutOfDomain { value: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("removable constant undefined for an empty set")]
    EmptySet,

    #[error("interval set has zero measure")]
    ZeroMeasure,

    #[error("bandwidth count k_omega = {k} outside [1, {n}]")]
    InvalidBandwidth { k: usize, n: usize },

    #[error("sample budget m = {m} exceeds node count {n}")]
    BudgetExceedsNodes { m: usize, n: usize },

    #[error("sample budget m = {m} below bandwidth count k_omega = {k}")]
    BudgetBelowBandwidth { m: usize, k: usize },

    #[error("transfer budget {requested} unreachable from source set; at most {achievable} cells available")]
    TransferBudget { requested: usize, achievable: usize },

    #[error("subset enumeration too large: C({n},{m}) exceeds {limit}")]
    CombinatorialBudget { n: usize, m: usize, limit: u64 },

    #[error("invalid experiment config: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
