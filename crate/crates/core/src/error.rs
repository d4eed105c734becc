use thiserror::Error;

/// Errors produced while building graphs, configuring runs, or analysing curves.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("node {node} out of range for graph with {node_count} nodes")]
    NodeOutOfRange { node: usize, node_count: usize },

    #[error("node {0} has already adopted; utility and probability are undefined for it")]
    AlreadyAdopted(usize),

    #[error("cost model `{cost}` is not valid on a {graph} graph")]
    CostModelMismatch { cost: &'static str, graph: &'static str },

    #[error("unknown preset `{name}`; valid presets are: {valid}")]
    UnknownPreset { name: String, valid: String },

    #[error("malformed edge list at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("malformed snapshot: {0}")]
    Snapshot(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
