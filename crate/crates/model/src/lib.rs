//! Relation-aware multi-embedding model.
//!
//! Each node gets one embedding per canonical relation. A level-k
//! representation combines a relation-specific view of the node itself with
//! an averaged, transformed message from its sampled relation neighborhood;
//! relational self-attention then mixes the per-relation representations so
//! every relation's embedding can draw on the others. Training maximizes
//! agreement between a node's relation embedding and the context embeddings
//! of nodes it co-occurs with on relation-constrained random walks, against
//! noise-sampled negatives.
//!
//! Gradients are exact: the forward pass records a tape and the
//! negative-sampling loss contributes closed-form seeds, which
//! [`gradient_check`] verifies against central finite differences.

mod adam;
mod checkpoint;
mod config;
mod embed;
mod forward;
mod gradcheck;
mod loss;
mod params;
mod tape;
mod train;

pub use adam::Adam;
pub use checkpoint::{load_checkpoint, save_checkpoint, CHECKPOINT_MAGIC};
pub use config::{Activation, AttentionMode, TrainConfig};
pub use embed::{embed_all, write_embeddings_tsv, EmbeddingSet};
pub use forward::{
    forward, forward_reference, neighbor_message, relation_conv, relational_attention,
    ForwardResult,
};
pub use gradcheck::{gradient_check, CheckBatch, CheckTriple};
pub use loss::{nce_loss, NceGradients};
pub use params::{GradStore, ModelMeta, ModelParameters, TensorData, TensorId};
pub use tape::{Tape, Var};
pub use train::{
    train, write_history_csv, EpochRecord, TrainOutcome, TrainedModel, ValidationEdge,
    ValidationSet,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("non-finite value at level {level}, relation {relation}")]
    NonFinite { level: usize, relation: u16 },
    #[error("training diverged (non-finite loss) at epoch {epoch}, batch {batch}")]
    Diverged { epoch: usize, batch: usize },
    #[error("walk corpus is empty")]
    EmptyCorpus,
    #[error("invalid configuration: {0}")]
    BadConfig(String),
    #[error("checkpoint does not match graph: {0}")]
    SchemaMismatch(String),
    #[error("corrupt checkpoint {path}: {msg}")]
    Checkpoint {
        path: std::path::PathBuf,
        msg: String,
    },
    #[error("i/o error on {path}: {source}")]
    Io {
        path: std::path::PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Graph(#[from] graph_core::GraphError),
    #[error(transparent)]
    Walk(#[from] walker::WalkError),
}

pub type Result<T> = std::result::Result<T, ModelError>;
