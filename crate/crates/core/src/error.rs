use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Everything the library can fail with.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("hypergraph is disconnected: vertex {vertex} is not reachable from vertex 0")]
    Disconnected { vertex: usize },
    #[error("hyperedge {edge} has non-positive or non-finite weight {weight}")]
    NonPositiveWeight { edge: usize, weight: f64 },
    #[error("hyperedge {edge} is degenerate: {reason}")]
    DegenerateHyperedge { edge: usize, reason: String },
    #[error("vertex {vertex} is out of range for a hypergraph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("alpha {0} is outside [0, 1]")]
    AlphaOutOfRange(f64),
    #[error("measures are unbalanced: total masses {left} and {right}")]
    UnbalancedMeasures { left: f64, right: f64 },
    #[error("weight of hyperedge {edge} became {weight} at iteration {iteration}; the flow diverged")]
    NonFiniteWeight {
        edge: usize,
        iteration: usize,
        weight: f64,
    },
    #[error("invalid flow parameters: {0}")]
    InvalidFlowParams(String),
    #[error("label vector has {labels} entries but the hypergraph has {vertices} vertices")]
    LabelLengthMismatch { labels: usize, vertices: usize },
    #[error("partitions cover {left} and {right} vertices")]
    VertexSetMismatch { left: usize, right: usize },
    #[error("infeasible generator parameters: {0}")]
    InfeasibleParams(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("hypergraph too large: E = {pairs} member pairs exceeds the budget of {budget}; curvature cost grows as O(E*D^3)")]
    BudgetExceeded { pairs: u64, budget: u64 },
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    /// Stable identifier used in machine-readable CLI output.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Disconnected { .. } => "Disconnected",
            Error::NonPositiveWeight { .. } => "NonPositiveWeight",
            Error::DegenerateHyperedge { .. } => "DegenerateHyperedge",
            Error::VertexOutOfRange { .. } => "VertexOutOfRange",
            Error::AlphaOutOfRange(_) => "AlphaOutOfRange",
            Error::UnbalancedMeasures { .. } => "UnbalancedMeasures",
            Error::NonFiniteWeight { .. } => "NonFiniteWeight",
            Error::InvalidFlowParams(_) => "InvalidFlowParams",
            Error::LabelLengthMismatch { .. } => "LabelLengthMismatch",
            Error::VertexSetMismatch { .. } => "VertexSetMismatch",
            Error::InfeasibleParams(_) => "InfeasibleParams",
            Error::Parse { .. } => "ParseError",
            Error::BudgetExceeded { .. } => "BudgetExceeded",
            Error::Internal(_) => "Internal",
        }
    }
}
