use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Structurally invalid dataset (shape, positivity, share sums).
    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    /// The phase-1 solver hit its iteration cap without a verdict.
    #[error("LP solver stalled after {iterations} iterations")]
    SolverStall { iterations: usize },

    /// A negative-weight cycle was found where none is permitted.
    #[error("negative cycle {cycle:?} with weight {weight}")]
    NegativeCycle { cycle: Vec<usize>, weight: f64 },

    #[error("exhaustive cycle enumeration needs T <= {cap}, got T = {t}; use sampled-cycle mode")]
    CycleCapExceeded { t: usize, cap: usize },

    #[error("rejection sampler gave up after {0} attempts")]
    RejectionCap(usize),

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
