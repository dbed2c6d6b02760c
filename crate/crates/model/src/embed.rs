use std::io::Write;
use std::path::Path;

use graph_core::{build_k_level_sample, MultiplexGraph, NodeId, RelationId};
use ndarray::{Array2, ArrayView1};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::AttentionMode;
use crate::forward::forward_reference;
use crate::params::ModelParameters;
use crate::{ModelError, Result};

/// Final multi-embeddings: per node, an |R| x d matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingSet {
    pub per_node: Vec<Array2<f64>>,
    pub relation_count: usize,
    pub dim: usize,
}

impl EmbeddingSet {
    pub fn row(&self, v: NodeId, r: RelationId) -> ArrayView1<'_, f64> {
        self.per_node[v as usize].row(r as usize)
    }

    pub fn node_count(&self) -> usize {
        self.per_node.len()
    }
}

fn mix_seed(seed: u64, v: NodeId) -> u64 {
    // distinct stream per node, stable across runs
    let mut x = seed ^ 0xa076_1d64_78bd_642f ^ ((v as u64) << 1);
    x ^= x >> 33;
    x = x.wrapping_mul(0xff51_afd7_ed55_8ccd);
    x ^= x >> 33;
    x
}

/// Embed every node of the graph: one fixed-budget sample tree per node,
/// seeded per node id so results do not depend on iteration order.
pub fn embed_all(
    params: &ModelParameters,
    g: &MultiplexGraph,
    budgets: &[usize],
    seed: u64,
    mode: AttentionMode,
) -> Result<EmbeddingSet> {
    params.validate_against(g)?;
    let mut per_node = Vec::with_capacity(g.node_count());
    for v in 0..g.node_count() as NodeId {
        let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, v));
        let tree = build_k_level_sample(g, v, budgets.len(), budgets, &mut rng)?;
        let (embeddings, _) = forward_reference(params, g, &tree, mode)?;
        per_node.push(embeddings);
    }
    Ok(EmbeddingSet {
        per_node,
        relation_count: params.meta.relation_count,
        dim: params.meta.embedding_dim,
    })
}

/// Write embeddings as TSV rows `node_id relation_id v1 ... v_d`.
pub fn write_embeddings_tsv(emb: &EmbeddingSet, path: &Path) -> Result<()> {
    let io = |source| ModelError::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = std::fs::File::create(path).map_err(io)?;
    let mut w = std::io::BufWriter::new(file);
    let mut inner = || -> std::io::Result<()> {
        for (v, mat) in emb.per_node.iter().enumerate() {
            for r in 0..emb.relation_count {
                write!(w, "{v}\t{r}")?;
                for c in 0..emb.dim {
                    write!(w, "\t{}", mat[(r, c)])?;
                }
                writeln!(w)?;
            }
        }
        w.flush()
    };
    inner().map_err(io)
}
