use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("I/O error: {0}")]
    Stream(#[from] std::io::Error),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("inconsistent METIS header: {0}")]
    MetisHeader(String),

    #[error("vertex {vertex} out of range for a graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),

    #[error("edge {{{0}, {1}}} is already present")]
    DuplicateEdge(usize, usize),

    #[error("block sequences describe different vertex counts ({left} vs {right})")]
    VertexCountMismatch { left: usize, right: usize },

    #[error("target sequence does not dominate the source sequence")]
    NotDominating,

    #[error("cost {0} is infeasible for this table")]
    InfeasibleCost(u64),

    #[error("instance exceeds the oracle limit: {0}")]
    OracleLimit(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
