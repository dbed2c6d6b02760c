//! In-memory data model for attributed heterogeneous multiplex networks.
//!
//! A multiplex graph holds typed nodes with per-type attribute matrices and
//! typed directed edges. Every distinct `(source node type, edge type,
//! destination node type)` triple observed in the edge set becomes a
//! *canonical relation*; all per-relation structure (adjacency, views,
//! neighborhood samples) is indexed by the dense relation id.
//!
//! The graph is immutable after construction, so concurrent readers need no
//! coordination. Sampling takes caller-supplied generators; parallel callers
//! should derive one generator per worker.

mod cache;
mod error;
mod graph;
mod load;
mod sample;
mod view;

pub use cache::{read_cache, write_cache, CACHE_MAGIC, CACHE_VERSION};
pub use error::GraphError;
pub use graph::{graph_from_parts, CanonicalRelation, Direction, GraphBuilder, MultiplexGraph};
pub use load::{load_graph, LoadOptions};
pub use sample::{build_k_level_sample, sample_neighborhood, SampleTree};
pub use view::GraphView;

/// Dense node identifier, `0..|V|`.
pub type NodeId = u32;
/// Dense node-type identifier, `0..|T_v|`.
pub type NodeTypeId = u16;
/// Dense edge-type identifier, `0..|T_e|`.
pub type EdgeTypeId = u16;
/// Dense canonical-relation identifier, `0..|R|`.
pub type RelationId = u16;

pub type Result<T> = std::result::Result<T, GraphError>;
