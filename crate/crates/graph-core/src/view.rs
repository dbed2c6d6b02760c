use crate::graph::MultiplexGraph;
use crate::{GraphError, NodeId, RelationId, Result};

/// Read-only view of one relation layer: edges of that relation only, node
/// set restricted to the relation's endpoint types.
#[derive(Debug, Clone, Copy)]
pub struct GraphView<'g> {
    graph: &'g MultiplexGraph,
    relation: RelationId,
}

impl MultiplexGraph {
    pub fn relation_view(&self, r: RelationId) -> Result<GraphView<'_>> {
        if (r as usize) >= self.relation_count() {
            return Err(GraphError::UnknownRelation(r));
        }
        Ok(GraphView {
            graph: self,
            relation: r,
        })
    }
}

impl<'g> GraphView<'g> {
    pub fn graph(&self) -> &'g MultiplexGraph {
        self.graph
    }

    pub fn relation(&self) -> RelationId {
        self.relation
    }

    pub fn contains(&self, v: NodeId) -> bool {
        (v as usize) < self.graph.node_count() && self.graph.type_compatible(v, self.relation)
    }

    /// Nodes of the relation's endpoint types, ascending.
    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + 'g {
        let graph = self.graph;
        let relation = self.relation;
        (0..graph.node_count() as NodeId).filter(move |&v| graph.type_compatible(v, relation))
    }

    pub fn node_count(&self) -> usize {
        self.nodes().count()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count(self.relation)
    }

    pub fn out_neighbors(&self, v: NodeId) -> &'g [NodeId] {
        if !self.contains(v) {
            return &[];
        }
        self.graph.out_neighbors(v, self.relation)
    }

    pub fn in_neighbors(&self, v: NodeId) -> &'g [NodeId] {
        if !self.contains(v) {
            return &[];
        }
        self.graph.in_neighbors(v, self.relation)
    }

    /// Simple-graph neighborhood: symmetrized, de-duplicated, no self-loops.
    pub fn neighbors(&self, v: NodeId) -> &'g [NodeId] {
        if !self.contains(v) {
            return &[];
        }
        self.graph.sym_neighbors(v, self.relation)
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.neighbors(v).len()
    }

    /// Adjacency in the symmetrized simple layer.
    pub fn has_edge(&self, a: NodeId, b: NodeId) -> bool {
        self.neighbors(a).binary_search(&b).is_ok()
    }
}
