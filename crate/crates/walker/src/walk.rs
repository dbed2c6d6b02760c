use graph_core::{Direction, MultiplexGraph, NodeId, RelationId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::schema::MetapathSchema;
use crate::{splitmix64, Result, WalkError};

/// One relation-tagged walk. `truncated` marks walks cut short because no
/// eligible neighbor existed mid-walk; the prefix is kept when it still has
/// at least two nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Walk {
    pub relation: RelationId,
    pub nodes: Vec<NodeId>,
    pub truncated: bool,
}

/// A corpus of walks in canonical order: relation-major, then start node,
/// then walk index.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WalkCorpus {
    pub walks: Vec<Walk>,
    pub relation_count: usize,
}

impl WalkCorpus {
    pub fn len(&self) -> usize {
        self.walks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.walks.is_empty()
    }
}

/// Walk-generation settings.
#[derive(Debug, Clone)]
pub struct WalkConfig {
    pub walks_per_node: usize,
    pub length: usize,
    pub schema: Option<MetapathSchema>,
    /// Incidence list walks follow; per-relation overrides win.
    pub direction: Direction,
    pub relation_directions: Vec<(RelationId, Direction)>,
    pub seed: u64,
}

impl Default for WalkConfig {
    fn default() -> Self {
        WalkConfig {
            walks_per_node: 20,
            length: 10,
            schema: None,
            direction: Direction::Out,
            relation_directions: Vec::new(),
            seed: 0,
        }
    }
}

impl WalkConfig {
    pub fn direction_for(&self, r: RelationId) -> Direction {
        self.relation_directions
            .iter()
            .find(|(rel, _)| *rel == r)
            .map(|(_, d)| *d)
            .unwrap_or(self.direction)
    }
}

fn eligible<'g>(
    g: &'g MultiplexGraph,
    v: NodeId,
    r: RelationId,
    dir: Direction,
    schema: Option<&MetapathSchema>,
    pos: usize,
) -> Vec<NodeId> {
    let neighbors = g.neighbors(v, r, dir);
    match schema {
        None => neighbors.to_vec(),
        Some(s) => {
            let want = s.type_at(pos + 1);
            neighbors
                .iter()
                .copied()
                .filter(|&u| g.node_type(u) == want)
                .collect()
        }
    }
}

/// Transition probabilities from `v` at 0-based walk position `step`:
/// uniform over the relation-`r` neighbors whose type matches the schema's
/// next slot (all neighbors without a schema). Nodes absent from the table
/// have probability zero; an empty table means the walk is stuck.
pub fn transition_distribution(
    g: &MultiplexGraph,
    v: NodeId,
    r: RelationId,
    schema: Option<&MetapathSchema>,
    step: usize,
    dir: Direction,
) -> Vec<(NodeId, f64)> {
    let candidates = eligible(g, v, r, dir, schema, step);
    if candidates.is_empty() {
        return Vec::new();
    }
    let p = 1.0 / candidates.len() as f64;
    candidates.into_iter().map(|u| (u, p)).collect()
}

/// Draw one transition according to [`transition_distribution`].
pub fn sample_transition<R: Rng + ?Sized>(
    g: &MultiplexGraph,
    v: NodeId,
    r: RelationId,
    schema: Option<&MetapathSchema>,
    step: usize,
    dir: Direction,
    rng: &mut R,
) -> Option<NodeId> {
    let candidates = eligible(g, v, r, dir, schema, step);
    if candidates.is_empty() {
        None
    } else {
        Some(candidates[rng.random_range(0..candidates.len())])
    }
}

fn walk_from<R: Rng + ?Sized>(
    g: &MultiplexGraph,
    start: NodeId,
    r: RelationId,
    cfg: &WalkConfig,
    rng: &mut R,
) -> Option<Walk> {
    let dir = cfg.direction_for(r);
    let mut nodes = Vec::with_capacity(cfg.length);
    nodes.push(start);
    let mut truncated = false;
    while nodes.len() < cfg.length {
        let v = *nodes.last().unwrap();
        match sample_transition(g, v, r, cfg.schema.as_ref(), nodes.len() - 1, dir, rng) {
            Some(u) => nodes.push(u),
            None => {
                truncated = true;
                break;
            }
        }
    }
    // stuck immediately: drop rather than emit a single-node walk
    if nodes.len() < 2 {
        return None;
    }
    Some(Walk {
        relation: r,
        nodes,
        truncated,
    })
}

/// Generate `walks_per_node` walks for every (node, relation) pair where the
/// node participates in the relation (and matches the schema's start type).
/// Deterministic given the seed: every (relation, node) pair draws from its
/// own derived generator, so worker scheduling cannot reorder results.
pub fn generate_walks(g: &MultiplexGraph, cfg: &WalkConfig) -> Result<WalkCorpus> {
    if cfg.walks_per_node == 0 {
        return Err(WalkError::ZeroWalks);
    }
    if cfg.length < 2 {
        return Err(WalkError::WalkTooShort);
    }
    if let Some(schema) = &cfg.schema {
        for pos in 0..schema.len() {
            let t = schema.type_at(pos);
            if (t as usize) >= g.node_type_count() {
                return Err(WalkError::SchemaUnknownType(t, g.node_type_count()));
            }
        }
    }

    let pairs: Vec<(RelationId, NodeId)> = (0..g.relation_count() as RelationId)
        .flat_map(|r| (0..g.node_count() as NodeId).map(move |v| (r, v)))
        .collect();

    let walks: Vec<Walk> = pairs
        .par_iter()
        .flat_map_iter(|&(r, v)| {
            let mut out = Vec::new();
            let start_ok = match &cfg.schema {
                Some(s) => g.node_type(v) == s.start_type(),
                None => g.type_compatible(v, r),
            };
            let dir = cfg.direction_for(r);
            if start_ok && !g.neighbors(v, r, dir).is_empty() {
                let seed = splitmix64(cfg.seed ^ ((r as u64) << 33) ^ ((v as u64) << 1));
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                for _ in 0..cfg.walks_per_node {
                    if let Some(walk) = walk_from(g, v, r, cfg, &mut rng) {
                        out.push(walk);
                    }
                }
            }
            out
        })
        .collect();

    Ok(WalkCorpus {
        walks,
        relation_count: g.relation_count(),
    })
}
