//! Random-walk corpus generation for relation-aware embedding training.
//!
//! Walks are confined to one relation layer each and optionally constrained
//! by a metapath schema over node types. Sliding-window context pairs become
//! `(center, relation, context)` training triples; negative samples come
//! from per-node-type noise distributions.

mod context;
mod noise;
mod schema;
mod shard;
mod walk;

pub use context::{extract_contexts, ContextTriple};
pub use noise::{build_noise_distribution, NoiseDistribution, NoiseKind};
pub use schema::MetapathSchema;
pub use shard::{load_shards, save_shards};
pub use walk::{
    generate_walks, sample_transition, transition_distribution, Walk, WalkConfig, WalkCorpus,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum WalkError {
    #[error("metapath schema must list at least two node types")]
    SchemaTooShort,
    #[error("schema names node type {0}, graph has {1} types")]
    SchemaUnknownType(u16, usize),
    #[error("walks_per_node must be at least 1")]
    ZeroWalks,
    #[error("walk length must be at least 2")]
    WalkTooShort,
    #[error("context window must be at least 1")]
    ZeroWindow,
    #[error("node type {0} has no members")]
    EmptyTypeSet(u16),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: std::path::PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("corrupt walk shard {path}: {msg}")]
    Shard {
        path: std::path::PathBuf,
        msg: String,
    },
    #[error(transparent)]
    Graph(#[from] graph_core::GraphError),
}

pub type Result<T> = std::result::Result<T, WalkError>;

/// Stable 64-bit mix used to derive independent per-(relation, node) seeds.
pub(crate) fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}
