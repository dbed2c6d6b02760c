use graph_core::{GraphView, NodeId, RelationId};

use crate::catalog::{classify_induced, MOTIF_COUNT};

/// Per-(node, layer) motif participation counts, in catalog order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MotifCountVector {
    pub node: NodeId,
    pub relation: RelationId,
    pub counts: [u64; MOTIF_COUNT],
}

impl MotifCountVector {
    pub fn zero(node: NodeId, relation: RelationId) -> Self {
        MotifCountVector {
            node,
            relation,
            counts: [0; MOTIF_COUNT],
        }
    }
}

/// Connected-subgraph enumerator over a symmetrized layer.
///
/// Expands an extension frontier with exclusive neighbors only, so every
/// connected induced vertex set is visited exactly once per root. With
/// `bound = Some(root)` only vertices above the root may join, which makes a
/// sweep over all roots enumerate every connected set in the layer once.
/// With `bound = None` the walk enumerates every connected set containing
/// the root exactly once.
struct Enumerator<'v, 'g> {
    view: &'v GraphView<'g>,
    closed: Vec<bool>,
    sub: Vec<NodeId>,
}

impl<'v, 'g> Enumerator<'v, 'g> {
    fn new(view: &'v GraphView<'g>, node_count: usize) -> Self {
        Enumerator {
            view,
            closed: vec![false; node_count],
            sub: Vec::with_capacity(4),
        }
    }

    fn run(&mut self, root: NodeId, bound: Option<NodeId>, visit: &mut impl FnMut(&[NodeId])) {
        self.closed[root as usize] = true;
        self.sub.push(root);
        let init: Vec<NodeId> = self
            .view
            .neighbors(root)
            .iter()
            .copied()
            .filter(|&u| bound.is_none_or(|b| u > b))
            .collect();
        for &u in &init {
            self.closed[u as usize] = true;
        }
        // extend drains its frontier, so unmark from the saved copy
        let mut ext = init.clone();
        self.extend(&mut ext, bound, visit);
        for &u in &init {
            self.closed[u as usize] = false;
        }
        self.sub.pop();
        self.closed[root as usize] = false;
    }

    fn extend(
        &mut self,
        ext: &mut Vec<NodeId>,
        bound: Option<NodeId>,
        visit: &mut impl FnMut(&[NodeId]),
    ) {
        if self.sub.len() >= 2 {
            visit(&self.sub);
        }
        if self.sub.len() == 4 {
            return;
        }
        while let Some(w) = ext.pop() {
            let mut added = Vec::new();
            for &u in self.view.neighbors(w) {
                if !self.closed[u as usize] && bound.is_none_or(|b| u > b) {
                    self.closed[u as usize] = true;
                    added.push(u);
                }
            }
            self.sub.push(w);
            let mut next_ext: Vec<NodeId> = ext.clone();
            next_ext.extend(added.iter().copied());
            self.extend(&mut next_ext, bound, visit);
            self.sub.pop();
            for &u in &added {
                self.closed[u as usize] = false;
            }
        }
    }
}

fn classify_and_count(view: &GraphView<'_>, sub: &[NodeId], bump: &mut impl FnMut(usize, usize)) {
    let size = sub.len();
    let mut edge_count = 0usize;
    let mut degrees = [0usize; 4];
    for i in 0..size {
        for j in (i + 1)..size {
            if view.has_edge(sub[i], sub[j]) {
                edge_count += 1;
                degrees[i] += 1;
                degrees[j] += 1;
            }
        }
    }
    let max_degree = degrees[..size].iter().copied().max().unwrap_or(0);
    let motif = classify_induced(size, edge_count, max_degree) as usize;
    for i in 0..size {
        bump(sub[i] as usize, motif);
    }
}

/// Motif participation of a single node on one layer: the number of vertex
/// subsets containing `v` whose induced subgraph is connected and isomorphic
/// to each catalog motif. Isolated or absent nodes get all zeros.
pub fn count_motifs_node(view: &GraphView<'_>, v: NodeId) -> MotifCountVector {
    let mut result = MotifCountVector::zero(v, view.relation());
    if !view.contains(v) {
        return result;
    }
    let node_count = view.graph().node_count();
    let mut enumerator = Enumerator::new(view, node_count);
    enumerator.run(v, None, &mut |sub| {
        classify_and_count(view, sub, &mut |member, motif| {
            if member == v as usize {
                result.counts[motif] += 1;
            }
        });
    });
    result
}

/// Motif participation of every node on one layer in a single sweep: each
/// connected subgraph is enumerated once and credited to all its members.
/// Agrees exactly with [`count_motifs_node`] per node.
pub fn count_all_nodes(view: &GraphView<'_>) -> Vec<MotifCountVector> {
    let node_count = view.graph().node_count();
    let mut per_node = vec![[0u64; MOTIF_COUNT]; node_count];
    let mut enumerator = Enumerator::new(view, node_count);
    for root in view.nodes() {
        enumerator.run(root, Some(root), &mut |sub| {
            classify_and_count(view, sub, &mut |member, motif| {
                per_node[member][motif] += 1;
            });
        });
    }
    per_node
        .into_iter()
        .enumerate()
        .map(|(v, counts)| MotifCountVector {
            node: v as NodeId,
            relation: view.relation(),
            counts,
        })
        .collect()
}
