use graph_core::{GraphView, NodeId};

use crate::catalog::{pair_bit, MotifCatalog};
use crate::count::MotifCountVector;
use crate::{MotifError, Result};

/// Node-count guard for the exhaustive oracle.
pub const ORACLE_NODE_LIMIT: usize = 200;

fn induced_mask(view: &GraphView<'_>, sub: &[NodeId]) -> u8 {
    let size = sub.len();
    let mut mask = 0u8;
    for i in 0..size {
        for j in (i + 1)..size {
            if view.has_edge(sub[i], sub[j]) {
                mask |= 1 << pair_bit(i, j, size);
            }
        }
    }
    mask
}

fn is_connected(mask: u8, size: usize) -> bool {
    let mut reached = 1usize; // vertex 0
    loop {
        let mut next = reached;
        for i in 0..size {
            if reached & (1 << i) == 0 {
                continue;
            }
            for j in 0..size {
                if i != j {
                    let (a, b) = (i.min(j), i.max(j));
                    if mask & (1 << pair_bit(a, b, size)) != 0 {
                        next |= 1 << j;
                    }
                }
            }
        }
        if next == reached {
            break;
        }
        reached = next;
    }
    reached == (1 << size) - 1
}

/// Reference implementation of [`crate::count_motifs_node`]: enumerate every
/// 2/3/4-subset containing `v`, keep the connected induced subgraphs, and
/// classify each by canonical form. Guarded to small layers.
pub fn brute_force_motif_oracle(view: &GraphView<'_>, v: NodeId) -> Result<MotifCountVector> {
    let nodes: Vec<NodeId> = view.nodes().collect();
    if nodes.len() > ORACLE_NODE_LIMIT {
        return Err(MotifError::ViewTooLarge {
            nodes: nodes.len(),
            limit: ORACLE_NODE_LIMIT,
        });
    }
    let mut result = MotifCountVector::zero(v, view.relation());
    if !view.contains(v) {
        return Ok(result);
    }
    let catalog = MotifCatalog::global();
    let others: Vec<NodeId> = nodes.into_iter().filter(|&u| u != v).collect();
    let m = others.len();

    let mut tally = |sub: &[NodeId]| {
        let mask = induced_mask(view, sub);
        if is_connected(mask, sub.len()) {
            let motif = catalog
                .classify_canonical(mask, sub.len())
                .expect("connected subgraph on 2..=4 nodes");
            result.counts[motif as usize] += 1;
        }
    };

    for a in 0..m {
        tally(&[v, others[a]]);
        for b in (a + 1)..m {
            tally(&[v, others[a], others[b]]);
            for c in (b + 1)..m {
                tally(&[v, others[a], others[b], others[c]]);
            }
        }
    }
    Ok(result)
}
