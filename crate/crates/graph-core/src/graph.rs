use ndarray::{Array2, ArrayView1};

use crate::error::GraphError;
use crate::{EdgeTypeId, NodeId, NodeTypeId, RelationId, Result};

/// A canonical relation: the 3-tuple naming one layer of the multiplex graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalRelation {
    pub src_type: NodeTypeId,
    pub edge_type: EdgeTypeId,
    pub dst_type: NodeTypeId,
    pub relation_id: RelationId,
}

/// Which incidence list a neighborhood query reads on a directed relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Out,
    In,
    /// Union of in- and out-neighbors, de-duplicated, self-loops dropped.
    Undirected,
}

/// Compressed sparse rows; each row holds ascending neighbor ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Csr {
    offsets: Vec<usize>,
    targets: Vec<NodeId>,
}

impl Csr {
    fn from_pairs(node_count: usize, pairs: &[(NodeId, NodeId)]) -> Self {
        // pairs must be sorted by (src, dst) and de-duplicated
        let mut offsets = vec![0usize; node_count + 1];
        for &(src, _) in pairs {
            offsets[src as usize + 1] += 1;
        }
        for i in 0..node_count {
            offsets[i + 1] += offsets[i];
        }
        let targets = pairs.iter().map(|&(_, dst)| dst).collect();
        Csr { offsets, targets }
    }

    pub(crate) fn row(&self, v: NodeId) -> &[NodeId] {
        &self.targets[self.offsets[v as usize]..self.offsets[v as usize + 1]]
    }

    pub(crate) fn len(&self) -> usize {
        self.targets.len()
    }
}

/// Per-relation adjacency: forward, reverse, and symmetrized incidence.
#[derive(Debug, Clone)]
pub(crate) struct Layer {
    pub(crate) out_csr: Csr,
    pub(crate) in_csr: Csr,
    /// Simple undirected companion: merged out/in neighbors, no self-loops.
    pub(crate) sym_csr: Csr,
    pub(crate) self_loops: usize,
}

/// An attributed heterogeneous multiplex graph, immutable after construction.
#[derive(Debug, Clone)]
pub struct MultiplexGraph {
    node_type_names: Vec<String>,
    edge_type_names: Vec<String>,
    node_types: Vec<NodeTypeId>,
    relations: Vec<CanonicalRelation>,
    layers: Vec<Layer>,
    /// Attribute matrix per node type; row order follows `type_members`.
    features: Vec<Array2<f64>>,
    type_members: Vec<Vec<NodeId>>,
    /// Row index of each node inside its type's feature matrix.
    type_row: Vec<u32>,
    agg_direction: Vec<Direction>,
    undirected: bool,
}

impl MultiplexGraph {
    pub fn node_count(&self) -> usize {
        self.node_types.len()
    }

    pub fn node_type(&self, v: NodeId) -> NodeTypeId {
        self.node_types[v as usize]
    }

    pub fn node_type_count(&self) -> usize {
        self.node_type_names.len()
    }

    pub fn edge_type_count(&self) -> usize {
        self.edge_type_names.len()
    }

    pub fn node_type_name(&self, t: NodeTypeId) -> &str {
        &self.node_type_names[t as usize]
    }

    pub fn edge_type_name(&self, t: EdgeTypeId) -> &str {
        &self.edge_type_names[t as usize]
    }

    pub fn node_type_names(&self) -> &[String] {
        &self.node_type_names
    }

    pub fn edge_type_names(&self) -> &[String] {
        &self.edge_type_names
    }

    pub fn relations(&self) -> &[CanonicalRelation] {
        &self.relations
    }

    pub fn relation_count(&self) -> usize {
        self.relations.len()
    }

    pub fn relation(&self, r: RelationId) -> Result<&CanonicalRelation> {
        self.relations
            .get(r as usize)
            .ok_or(GraphError::UnknownRelation(r))
    }

    pub fn is_undirected(&self) -> bool {
        self.undirected
    }

    /// Distinct stored edges of relation `r`: directed pairs, or unordered
    /// pairs counted once when the graph was ingested as undirected.
    pub fn edge_count(&self, r: RelationId) -> usize {
        let stored = self.layers[r as usize].out_csr.len();
        if self.undirected {
            let loops = self.layers[r as usize].self_loops;
            (stored - loops) / 2 + loops
        } else {
            stored
        }
    }

    pub fn total_edges(&self) -> usize {
        (0..self.relations.len() as RelationId)
            .map(|r| self.edge_count(r))
            .sum()
    }

    pub fn self_loop_count(&self, r: RelationId) -> usize {
        self.layers[r as usize].self_loops
    }

    /// Canonical edge list of relation `r`, sorted ascending. For undirected
    /// graphs each edge appears once with `src <= dst`. Split manifests index
    /// into this ordering.
    pub fn canonical_edges(&self, r: RelationId) -> Vec<(NodeId, NodeId)> {
        let layer = &self.layers[r as usize];
        let mut edges = Vec::new();
        for v in 0..self.node_count() as NodeId {
            for &u in layer.out_csr.row(v) {
                if !self.undirected || v <= u {
                    edges.push((v, u));
                }
            }
        }
        edges
    }

    pub fn out_neighbors(&self, v: NodeId, r: RelationId) -> &[NodeId] {
        self.layers[r as usize].out_csr.row(v)
    }

    pub fn in_neighbors(&self, v: NodeId, r: RelationId) -> &[NodeId] {
        self.layers[r as usize].in_csr.row(v)
    }

    pub fn sym_neighbors(&self, v: NodeId, r: RelationId) -> &[NodeId] {
        self.layers[r as usize].sym_csr.row(v)
    }

    pub fn neighbors(&self, v: NodeId, r: RelationId, dir: Direction) -> &[NodeId] {
        match dir {
            Direction::Out => self.out_neighbors(v, r),
            Direction::In => self.in_neighbors(v, r),
            Direction::Undirected => self.sym_neighbors(v, r),
        }
    }

    pub fn has_edge(&self, src: NodeId, dst: NodeId, r: RelationId) -> bool {
        self.out_neighbors(src, r).binary_search(&dst).is_ok()
    }

    /// Neighborhood read by message aggregation, honoring the per-relation
    /// direction setting (in-neighbors unless reconfigured).
    pub fn aggregation_neighbors(&self, v: NodeId, r: RelationId) -> &[NodeId] {
        self.neighbors(v, r, self.agg_direction[r as usize])
    }

    pub fn aggregation_direction(&self, r: RelationId) -> Direction {
        self.agg_direction[r as usize]
    }

    /// Reconfigure which incidence list aggregation reads for every relation.
    pub fn with_aggregation_direction(mut self, dir: Direction) -> Self {
        for d in &mut self.agg_direction {
            *d = dir;
        }
        self
    }

    pub fn with_relation_direction(mut self, r: RelationId, dir: Direction) -> Self {
        self.agg_direction[r as usize] = dir;
        self
    }

    /// True when `v`'s type matches the relation's source or destination type.
    pub fn type_compatible(&self, v: NodeId, r: RelationId) -> bool {
        let rel = &self.relations[r as usize];
        let t = self.node_type(v);
        t == rel.src_type || t == rel.dst_type
    }

    pub fn feature_dim(&self, t: NodeTypeId) -> usize {
        self.features[t as usize].ncols()
    }

    pub fn features_of_type(&self, t: NodeTypeId) -> &Array2<f64> {
        &self.features[t as usize]
    }

    pub fn node_features(&self, v: NodeId) -> ArrayView1<'_, f64> {
        let t = self.node_type(v) as usize;
        self.features[t].row(self.type_row[v as usize] as usize)
    }

    pub fn nodes_of_type(&self, t: NodeTypeId) -> &[NodeId] {
        &self.type_members[t as usize]
    }

    /// Rebuild the graph with new attribute matrices (one per node type, row
    /// order unchanged). Used to inject motif-derived or combined features.
    pub fn with_features(mut self, features: Vec<Array2<f64>>) -> Result<Self> {
        if features.len() != self.node_type_names.len() {
            return Err(GraphError::Cache(format!(
                "expected {} feature matrices, got {}",
                self.node_type_names.len(),
                features.len()
            )));
        }
        for (t, mat) in features.iter().enumerate() {
            if mat.nrows() != self.type_members[t].len() {
                return Err(GraphError::FeatureDimMismatch {
                    type_name: self.node_type_names[t].clone(),
                    expected: self.type_members[t].len(),
                    found: mat.nrows(),
                    path: "<memory>".into(),
                    line: 0,
                });
            }
        }
        self.features = features;
        Ok(self)
    }

    pub(crate) fn parts(
        &self,
    ) -> (
        &[String],
        &[String],
        &[NodeTypeId],
        &[CanonicalRelation],
        &[Array2<f64>],
        &[Direction],
        bool,
    ) {
        (
            &self.node_type_names,
            &self.edge_type_names,
            &self.node_types,
            &self.relations,
            &self.features,
            &self.agg_direction,
            self.undirected,
        )
    }
}

/// Accumulates typed nodes and edges, then freezes them into a graph.
#[derive(Debug, Default)]
pub struct GraphBuilder {
    node_type_names: Vec<String>,
    edge_type_names: Vec<String>,
    node_types: Vec<NodeTypeId>,
    edges: Vec<(EdgeTypeId, NodeId, NodeId)>,
    undirected: bool,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn undirected(mut self, flag: bool) -> Self {
        self.undirected = flag;
        self
    }

    pub fn node_type_id(&mut self, name: &str) -> NodeTypeId {
        match self.node_type_names.iter().position(|n| n == name) {
            Some(i) => i as NodeTypeId,
            None => {
                self.node_type_names.push(name.to_string());
                (self.node_type_names.len() - 1) as NodeTypeId
            }
        }
    }

    pub fn edge_type_id(&mut self, name: &str) -> EdgeTypeId {
        match self.edge_type_names.iter().position(|n| n == name) {
            Some(i) => i as EdgeTypeId,
            None => {
                self.edge_type_names.push(name.to_string());
                (self.edge_type_names.len() - 1) as EdgeTypeId
            }
        }
    }

    /// Declare node `v`'s type; nodes must end up dense `0..|V|`.
    pub fn set_node_type(&mut self, v: NodeId, t: NodeTypeId) {
        if self.node_types.len() <= v as usize {
            self.node_types.resize(v as usize + 1, NodeTypeId::MAX);
        }
        self.node_types[v as usize] = t;
    }

    pub fn add_edge(&mut self, edge_type: EdgeTypeId, src: NodeId, dst: NodeId) {
        self.edges.push((edge_type, src, dst));
    }

    pub fn node_count(&self) -> usize {
        self.node_types.len()
    }

    pub fn type_name_count(&self) -> usize {
        self.node_type_names.len()
    }

    pub fn type_name(&self, t: usize) -> &str {
        &self.node_type_names[t]
    }

    pub fn node_type_of(&self, v: NodeId) -> NodeTypeId {
        self.node_types[v as usize]
    }

    /// Freeze into a graph. `features` holds one matrix per node type with one
    /// row per node of that type in ascending node-id order.
    pub fn build(self, features: Vec<Array2<f64>>) -> Result<MultiplexGraph> {
        let node_count = self.node_types.len();
        for (v, &t) in self.node_types.iter().enumerate() {
            if t == NodeTypeId::MAX {
                return Err(GraphError::NonDenseNodeIds {
                    expected: node_count,
                    id: v as u64,
                });
            }
        }

        let mut type_members = vec![Vec::new(); self.node_type_names.len()];
        let mut type_row = vec![0u32; node_count];
        for v in 0..node_count {
            let t = self.node_types[v] as usize;
            type_row[v] = type_members[t].len() as u32;
            type_members[t].push(v as NodeId);
        }

        if features.len() != self.node_type_names.len() {
            return Err(GraphError::Cache(format!(
                "expected {} feature matrices, got {}",
                self.node_type_names.len(),
                features.len()
            )));
        }
        for (t, mat) in features.iter().enumerate() {
            if mat.nrows() != type_members[t].len() {
                return Err(GraphError::MissingFeatureRow {
                    node: type_members[t]
                        .get(mat.nrows())
                        .copied()
                        .unwrap_or(u32::MAX),
                    type_name: self.node_type_names[t].clone(),
                });
            }
        }

        // Mirror before deriving relations so reversed relations exist for
        // heterogeneous endpoints.
        let mut edges = self.edges;
        if self.undirected {
            let mirrored: Vec<_> = edges.iter().map(|&(e, s, d)| (e, d, s)).collect();
            edges.extend(mirrored);
        }

        let mut relation_set: Vec<(NodeTypeId, EdgeTypeId, NodeTypeId)> = edges
            .iter()
            .map(|&(e, s, d)| (self.node_types[s as usize], e, self.node_types[d as usize]))
            .collect();
        relation_set.sort_unstable();
        relation_set.dedup();
        let relations: Vec<CanonicalRelation> = relation_set
            .iter()
            .enumerate()
            .map(|(i, &(src_type, edge_type, dst_type))| CanonicalRelation {
                src_type,
                edge_type,
                dst_type,
                relation_id: i as RelationId,
            })
            .collect();
        let rel_index = |src_t: NodeTypeId, e: EdgeTypeId, dst_t: NodeTypeId| -> RelationId {
            relation_set
                .binary_search(&(src_t, e, dst_t))
                .expect("relation derived from edge set") as RelationId
        };

        let mut per_relation: Vec<Vec<(NodeId, NodeId)>> = vec![Vec::new(); relations.len()];
        for &(e, s, d) in &edges {
            let r = rel_index(self.node_types[s as usize], e, self.node_types[d as usize]);
            per_relation[r as usize].push((s, d));
        }

        let mut layers = Vec::with_capacity(relations.len());
        for pairs in &mut per_relation {
            pairs.sort_unstable();
            pairs.dedup();
            let self_loops = pairs.iter().filter(|&&(s, d)| s == d).count();
            let out_csr = Csr::from_pairs(node_count, pairs);
            let mut rev: Vec<(NodeId, NodeId)> = pairs.iter().map(|&(s, d)| (d, s)).collect();
            rev.sort_unstable();
            let in_csr = Csr::from_pairs(node_count, &rev);
            let mut sym: Vec<(NodeId, NodeId)> = pairs
                .iter()
                .flat_map(|&(s, d)| [(s, d), (d, s)])
                .filter(|&(s, d)| s != d)
                .collect();
            sym.sort_unstable();
            sym.dedup();
            let sym_csr = Csr::from_pairs(node_count, &sym);
            layers.push(Layer {
                out_csr,
                in_csr,
                sym_csr,
                self_loops,
            });
        }

        let agg_direction = vec![Direction::In; relations.len()];
        Ok(MultiplexGraph {
            node_type_names: self.node_type_names,
            edge_type_names: self.edge_type_names,
            node_types: self.node_types,
            relations,
            layers,
            features,
            type_members,
            type_row,
            agg_direction,
            undirected: self.undirected,
        })
    }
}

/// Assemble a graph directly from memory; ids must already be dense.
/// Intended for tests and synthetic benchmarks.
pub fn graph_from_parts(
    node_types: Vec<NodeTypeId>,
    node_type_names: Vec<String>,
    edge_type_names: Vec<String>,
    edges: Vec<(EdgeTypeId, NodeId, NodeId)>,
    features: Vec<Array2<f64>>,
    undirected: bool,
) -> Result<MultiplexGraph> {
    let mut b = GraphBuilder::new().undirected(undirected);
    b.node_type_names = node_type_names;
    b.edge_type_names = edge_type_names;
    for (v, &t) in node_types.iter().enumerate() {
        b.set_node_type(v as NodeId, t);
    }
    for (e, s, d) in edges {
        b.add_edge(e, s, d);
    }
    b.build(features)
}
