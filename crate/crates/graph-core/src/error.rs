use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },
    #[error("{path}:{line}: unknown node id {id} (graph declares {node_count} nodes)")]
    UnknownNode {
        path: PathBuf,
        line: usize,
        id: u64,
        node_count: usize,
    },
    #[error(
        "feature dimension mismatch for node type `{type_name}`: expected {expected}, \
         found {found} ({path}:{line})"
    )]
    FeatureDimMismatch {
        type_name: String,
        expected: usize,
        found: usize,
        path: PathBuf,
        line: usize,
    },
    #[error("missing feature row for node {node} of type `{type_name}`")]
    MissingFeatureRow { node: u32, type_name: String },
    #[error("no feature file given for node type `{type_name}`")]
    MissingFeatureFile { type_name: String },
    #[error("node type file must cover ids 0..{expected}; id {id} is out of range or missing")]
    NonDenseNodeIds { expected: usize, id: u64 },
    #[error("duplicate node id {0} in node type file")]
    DuplicateNode(u64),
    #[error("unknown relation id {0}")]
    UnknownRelation(u16),
    #[error("node {node} has type {actual}, relation {relation} expects type {expected}")]
    TypeMismatch {
        node: u32,
        actual: u16,
        relation: u16,
        expected: u16,
    },
    #[error("sample size must be positive")]
    ZeroSampleSize,
    #[error("number of levels K must be at least 1")]
    ZeroLevels,
    #[error("expected {expected} per-level budgets, got {got}")]
    BudgetCount { expected: usize, got: usize },
    #[error("invalid cache file: {0}")]
    Cache(String),
}
