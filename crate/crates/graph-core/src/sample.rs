use rand::Rng;

use crate::graph::MultiplexGraph;
use crate::{GraphError, NodeId, RelationId, Result};

/// Fixed-budget expansion tree rooted at a target node.
///
/// `children[r]` holds the level-(depth+1) sample for relation `r`: a
/// multiset drawn uniformly with replacement from the node's aggregation
/// neighborhood. Level-k samples (k hops from the target) therefore sit at
/// tree depth k, and a node at depth j carries subtrees deep enough to
/// support `K - j` aggregation steps.
#[derive(Debug, Clone)]
pub struct SampleTree {
    pub node: NodeId,
    /// Aggregation levels this subtree supports (0 for leaves).
    pub levels: usize,
    /// Indexed by relation id; each entry is a sampled multiset of subtrees.
    pub children: Vec<Vec<SampleTree>>,
}

impl SampleTree {
    /// Total number of sampled tree nodes, excluding the root.
    pub fn sampled_count(&self) -> usize {
        self.children
            .iter()
            .flatten()
            .map(|c| 1 + c.sampled_count())
            .sum()
    }
}

/// Uniform sample with replacement from `v`'s aggregation neighborhood on
/// relation `r`. Returns `size` ids when the neighborhood is nonempty and an
/// empty vector otherwise. Deterministic given the generator state.
pub fn sample_neighborhood<R: Rng + ?Sized>(
    g: &MultiplexGraph,
    v: NodeId,
    r: RelationId,
    size: usize,
    rng: &mut R,
) -> Result<Vec<NodeId>> {
    if size == 0 {
        return Err(GraphError::ZeroSampleSize);
    }
    g.relation(r)?;
    let neighbors = g.aggregation_neighbors(v, r);
    if neighbors.is_empty() {
        return Ok(Vec::new());
    }
    Ok((0..size)
        .map(|_| neighbors[rng.random_range(0..neighbors.len())])
        .collect())
}

/// Build the K-level sample tree for `v`. `sizes[k-1]` is the per-relation
/// budget for level-k samples.
pub fn build_k_level_sample<R: Rng + ?Sized>(
    g: &MultiplexGraph,
    v: NodeId,
    k_levels: usize,
    sizes: &[usize],
    rng: &mut R,
) -> Result<SampleTree> {
    if k_levels == 0 {
        return Err(GraphError::ZeroLevels);
    }
    if sizes.len() != k_levels {
        return Err(GraphError::BudgetCount {
            expected: k_levels,
            got: sizes.len(),
        });
    }
    if sizes.iter().any(|&s| s == 0) {
        return Err(GraphError::ZeroSampleSize);
    }
    build_subtree(g, v, k_levels, sizes, 0, rng)
}

fn build_subtree<R: Rng + ?Sized>(
    g: &MultiplexGraph,
    v: NodeId,
    k_levels: usize,
    sizes: &[usize],
    depth: usize,
    rng: &mut R,
) -> Result<SampleTree> {
    let levels = k_levels - depth;
    if levels == 0 {
        return Ok(SampleTree {
            node: v,
            levels,
            children: Vec::new(),
        });
    }
    let mut children = Vec::with_capacity(g.relation_count());
    for r in 0..g.relation_count() as RelationId {
        let sampled = sample_neighborhood(g, v, r, sizes[depth], rng)?;
        let mut subtrees = Vec::with_capacity(sampled.len());
        for u in sampled {
            subtrees.push(build_subtree(g, u, k_levels, sizes, depth + 1, rng)?);
        }
        children.push(subtrees);
    }
    Ok(SampleTree {
        node: v,
        levels,
        children,
    })
}
