//! Structural node features from small-motif participation.
//!
//! Counts, for every node and every relation layer, the connected induced
//! subgraphs on 2..=4 nodes the node takes part in. Layers are symmetrized
//! before counting and treated as simple graphs. Two independent counting
//! routes are provided: the production kernel enumerates connected induced
//! subgraphs directly, and [`brute_force_motif_oracle`] re-derives the same
//! counts from raw subset enumeration for verification.

mod catalog;
mod count;
mod matrix;
mod oracle;

pub use catalog::{classify_induced, Motif, MotifCatalog, MOTIF_COUNT};
pub use count::{count_all_nodes, count_motifs_node, MotifCountVector};
pub use matrix::{
    combine_features, motif_feature_matrix, raw_count, raw_motif_counts, split_by_type,
    FeatureMatrix,
};
pub use oracle::{brute_force_motif_oracle, ORACLE_NODE_LIMIT};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum MotifError {
    #[error("oracle guard: view has {nodes} nodes, limit is {limit}")]
    ViewTooLarge { nodes: usize, limit: usize },
    #[error("row count mismatch: {left} vs {right}")]
    RowMismatch { left: usize, right: usize },
    #[error("i/o error on {path}: {source}")]
    Io {
        path: std::path::PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {msg}")]
    Parse {
        path: std::path::PathBuf,
        line: usize,
        msg: String,
    },
    #[error(transparent)]
    Graph(#[from] graph_core::GraphError),
}

pub type Result<T> = std::result::Result<T, MotifError>;
