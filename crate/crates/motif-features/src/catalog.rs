use std::collections::HashMap;
use std::sync::OnceLock;

/// Number of connected simple-graph isomorphism classes on 2..=4 nodes.
pub const MOTIF_COUNT: usize = 9;

/// The motif classes, in the fixed catalog order used for every count vector
/// and feature column: size-2 first, then size-3, then size-4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(usize)]
pub enum Motif {
    Edge = 0,
    Path3 = 1,
    Triangle = 2,
    Path4 = 3,
    Star3 = 4,
    Cycle4 = 5,
    TailedTriangle = 6,
    Diamond = 7,
    Clique4 = 8,
}

impl Motif {
    pub const ALL: [Motif; MOTIF_COUNT] = [
        Motif::Edge,
        Motif::Path3,
        Motif::Triangle,
        Motif::Path4,
        Motif::Star3,
        Motif::Cycle4,
        Motif::TailedTriangle,
        Motif::Diamond,
        Motif::Clique4,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Motif::Edge => "edge",
            Motif::Path3 => "path3",
            Motif::Triangle => "triangle",
            Motif::Path4 => "path4",
            Motif::Star3 => "star3",
            Motif::Cycle4 => "cycle4",
            Motif::TailedTriangle => "tailed_triangle",
            Motif::Diamond => "diamond",
            Motif::Clique4 => "clique4",
        }
    }

    pub fn size(self) -> usize {
        match self {
            Motif::Edge => 2,
            Motif::Path3 | Motif::Triangle => 3,
            _ => 4,
        }
    }

    fn representative_edges(self) -> &'static [(usize, usize)] {
        match self {
            Motif::Edge => &[(0, 1)],
            Motif::Path3 => &[(0, 1), (1, 2)],
            Motif::Triangle => &[(0, 1), (0, 2), (1, 2)],
            Motif::Path4 => &[(0, 1), (1, 2), (2, 3)],
            Motif::Star3 => &[(0, 1), (0, 2), (0, 3)],
            Motif::Cycle4 => &[(0, 1), (1, 2), (2, 3), (0, 3)],
            Motif::TailedTriangle => &[(0, 1), (0, 2), (1, 2), (2, 3)],
            Motif::Diamond => &[(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)],
            Motif::Clique4 => &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
        }
    }
}

/// Bit index of the unordered pair (i, j), i < j < size, in the adjacency
/// mask of a subgraph on `size` local vertices.
pub(crate) fn pair_bit(i: usize, j: usize, size: usize) -> usize {
    debug_assert!(i < j && j < size);
    // pairs enumerated as (0,1),(0,2),...,(0,s-1),(1,2),...
    let skipped: usize = (0..i).map(|a| size - a - 1).sum();
    skipped + (j - i - 1)
}

fn permutations(size: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        let n = used.len();
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; size], &mut out);
    out
}

/// Minimum adjacency mask over all vertex relabelings: the isomorphism
/// signature used by the oracle classification route.
pub(crate) fn canonical_mask(mask: u8, size: usize) -> u8 {
    let mut best = u8::MAX;
    for perm in permutations(size) {
        let mut relabeled = 0u8;
        for i in 0..size {
            for j in (i + 1)..size {
                if mask & (1 << pair_bit(i, j, size)) != 0 {
                    let (a, b) = (perm[i].min(perm[j]), perm[i].max(perm[j]));
                    relabeled |= 1 << pair_bit(a, b, size);
                }
            }
        }
        best = best.min(relabeled);
    }
    best
}

/// The ordered catalog of the nine motif classes with their canonical
/// adjacency signatures.
#[derive(Debug)]
pub struct MotifCatalog {
    signatures: Vec<(usize, u8)>,
    lookup: HashMap<(usize, u8), Motif>,
}

impl MotifCatalog {
    fn build() -> Self {
        let mut signatures = Vec::with_capacity(MOTIF_COUNT);
        let mut lookup = HashMap::new();
        for motif in Motif::ALL {
            let size = motif.size();
            let mut mask = 0u8;
            for &(i, j) in motif.representative_edges() {
                mask |= 1 << pair_bit(i, j, size);
            }
            let canon = canonical_mask(mask, size);
            signatures.push((size, canon));
            lookup.insert((size, canon), motif);
        }
        MotifCatalog { signatures, lookup }
    }

    pub fn global() -> &'static MotifCatalog {
        static CATALOG: OnceLock<MotifCatalog> = OnceLock::new();
        CATALOG.get_or_init(MotifCatalog::build)
    }

    /// Canonical (size, adjacency-mask) signature of a motif.
    pub fn signature(&self, motif: Motif) -> (usize, u8) {
        self.signatures[motif as usize]
    }

    /// Classify an induced connected subgraph by canonical form.
    pub fn classify_canonical(&self, mask: u8, size: usize) -> Option<Motif> {
        self.lookup.get(&(size, canonical_mask(mask, size))).copied()
    }
}

/// Classify a connected induced subgraph by size, edge count, and maximum
/// degree (these invariants separate all nine classes). The counting kernel
/// uses this route; the oracle classifies by canonical form instead.
pub fn classify_induced(size: usize, edge_count: usize, max_degree: usize) -> Motif {
    match (size, edge_count) {
        (2, 1) => Motif::Edge,
        (3, 2) => Motif::Path3,
        (3, 3) => Motif::Triangle,
        (4, 3) => {
            if max_degree == 3 {
                Motif::Star3
            } else {
                Motif::Path4
            }
        }
        (4, 4) => {
            if max_degree == 3 {
                Motif::TailedTriangle
            } else {
                Motif::Cycle4
            }
        }
        (4, 5) => Motif::Diamond,
        (4, 6) => Motif::Clique4,
        _ => unreachable!("not a connected simple graph on 2..=4 nodes: size {size}, edges {edge_count}"),
    }
}
