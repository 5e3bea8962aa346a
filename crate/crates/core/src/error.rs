use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("node {0} out of range (graph has {1} nodes)")]
    NodeOutOfRange(u32, usize),

    #[error("k-hop view of node {node} at radius {k} is not a tree (cycle within distance {k})")]
    NonTreeView { node: u32, k: u32 },

    #[error("protocol fault at node {node} in round {round}: {reason}")]
    ProtocolFault {
        node: u32,
        round: u32,
        reason: String,
    },

    #[error("cluster tree: {0}")]
    NonIntegralSizes(String),

    #[error("graph family instance would exceed the node budget: {need} > {budget}")]
    SizeGuard { need: u128, budget: u128 },

    #[error("invalid LP: {0}")]
    InvalidLp(String),

    #[error("LP coefficients must be 0/1 for rounding: {0}")]
    InvalidCoefficients(String),

    #[error("LP is infeasible")]
    Infeasible,

    #[error("LP is unbounded")]
    Unbounded,

    #[error("internal consistency failure: {0}")]
    InternalInconsistency(String),

    #[error("instance exceeds the oracle budget: {0}")]
    BudgetExceeded(String),

    #[error("graph must be connected")]
    Disconnected,

    #[error("given set is not a dominating set (node {0} is undominated)")]
    NotDominating(u32),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
