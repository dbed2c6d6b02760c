use graph_core::{MultiplexGraph, NodeId, NodeTypeId, RelationId};
use rand::Rng;

use crate::{Result, WalkError};

/// Shape of the negative-sampling noise distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseKind {
    Uniform,
    /// Nodes ranked by descending degree; rank k gets mass proportional to
    /// `ln(k + 2) - ln(k + 1)`.
    LogUniformByDegree,
}

/// Sampling table over one node type's members.
#[derive(Debug, Clone)]
pub struct NoiseDistribution {
    pub kind: NoiseKind,
    nodes: Vec<NodeId>,
    cumulative: Vec<f64>,
}

impl NoiseDistribution {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn prob(&self, u: NodeId) -> f64 {
        match self.nodes.iter().position(|&n| n == u) {
            None => 0.0,
            Some(i) => {
                let lo = if i == 0 { 0.0 } else { self.cumulative[i - 1] };
                self.cumulative[i] - lo
            }
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> NodeId {
        let x: f64 = rng.random();
        let idx = self.cumulative.partition_point(|&c| c < x);
        self.nodes[idx.min(self.nodes.len() - 1)]
    }
}

/// Total symmetrized degree across all relation layers.
fn total_degree(g: &MultiplexGraph, v: NodeId) -> usize {
    (0..g.relation_count() as RelationId)
        .map(|r| g.sym_neighbors(v, r).len())
        .sum()
}

/// Build the noise distribution over the members of one node type.
pub fn build_noise_distribution(
    g: &MultiplexGraph,
    node_type: NodeTypeId,
    kind: NoiseKind,
) -> Result<NoiseDistribution> {
    let members = g.nodes_of_type(node_type);
    if members.is_empty() {
        return Err(WalkError::EmptyTypeSet(node_type));
    }
    let (nodes, weights): (Vec<NodeId>, Vec<f64>) = match kind {
        NoiseKind::Uniform => (
            members.to_vec(),
            vec![1.0 / members.len() as f64; members.len()],
        ),
        NoiseKind::LogUniformByDegree => {
            let mut ranked: Vec<NodeId> = members.to_vec();
            // descending degree, ties broken by ascending node id
            ranked.sort_by_key(|&v| (std::cmp::Reverse(total_degree(g, v)), v));
            let raw: Vec<f64> = (0..ranked.len())
                .map(|k| ((k + 2) as f64).ln() - ((k + 1) as f64).ln())
                .collect();
            let total: f64 = raw.iter().sum();
            (ranked, raw.into_iter().map(|w| w / total).collect())
        }
    };
    let mut cumulative = Vec::with_capacity(weights.len());
    let mut acc = 0.0;
    for w in weights {
        acc += w;
        cumulative.push(acc);
    }
    if let Some(last) = cumulative.last_mut() {
        *last = 1.0;
    }
    Ok(NoiseDistribution {
        kind,
        nodes,
        cumulative,
    })
}
