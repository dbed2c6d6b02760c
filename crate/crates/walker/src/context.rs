use graph_core::{NodeId, RelationId};

use crate::walk::WalkCorpus;
use crate::{Result, WalkError};

/// One skip-gram training example: a center node, the relation of the walk
/// it came from, and a context node within the sliding window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ContextTriple {
    pub center: NodeId,
    pub relation: RelationId,
    pub context: NodeId,
}

/// Expand every walk into its window-`c` context triples: all ordered pairs
/// `(nodes[i], nodes[j])` with `|i - j| <= c` and `i != j`, tagged with the
/// walk's relation.
pub fn extract_contexts(corpus: &WalkCorpus, window: usize) -> Result<Vec<ContextTriple>> {
    if window == 0 {
        return Err(WalkError::ZeroWindow);
    }
    let mut triples = Vec::new();
    for walk in &corpus.walks {
        let n = walk.nodes.len();
        for i in 0..n {
            let lo = i.saturating_sub(window);
            let hi = (i + window).min(n - 1);
            for j in lo..=hi {
                if j != i {
                    triples.push(ContextTriple {
                        center: walk.nodes[i],
                        relation: walk.relation,
                        context: walk.nodes[j],
                    });
                }
            }
        }
    }
    Ok(triples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::walk::Walk;

    fn corpus(nodes: Vec<NodeId>) -> WalkCorpus {
        WalkCorpus {
            walks: vec![Walk {
                relation: 0,
                nodes,
                truncated: false,
            }],
            relation_count: 1,
        }
    }

    #[test]
    fn window_one_emits_adjacent_pairs_only() {
        let triples = extract_contexts(&corpus(vec![10, 11, 12]), 1).unwrap();
        let pairs: Vec<(u32, u32)> = triples.iter().map(|t| (t.center, t.context)).collect();
        assert_eq!(pairs, vec![(10, 11), (11, 10), (11, 12), (12, 11)]);
    }

    #[test]
    fn wide_window_adds_distant_pairs() {
        let triples = extract_contexts(&corpus(vec![10, 11, 12]), 5).unwrap();
        let pairs: Vec<(u32, u32)> = triples.iter().map(|t| (t.center, t.context)).collect();
        assert!(pairs.contains(&(10, 12)));
        assert!(pairs.contains(&(12, 10)));
        assert_eq!(pairs.len(), 6);
    }

    #[test]
    fn pair_count_matches_direct_enumeration() {
        // for every (length, window): count emitted pairs against a direct
        // double loop over index pairs
        for len in 2..9usize {
            for window in 1..7usize {
                let nodes: Vec<NodeId> = (0..len as u32).collect();
                let triples = extract_contexts(&corpus(nodes), window).unwrap();
                let mut expected = 0usize;
                for i in 0..len {
                    for j in 0..len {
                        if i != j && i.abs_diff(j) <= window {
                            expected += 1;
                        }
                    }
                }
                assert_eq!(triples.len(), expected, "len {len} window {window}");
            }
        }
    }

    #[test]
    fn zero_window_is_an_error() {
        assert!(extract_contexts(&corpus(vec![0, 1]), 0).is_err());
    }
}
