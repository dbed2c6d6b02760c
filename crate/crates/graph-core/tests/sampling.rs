use graph_core::{
    build_k_level_sample, graph_from_parts, sample_neighborhood, GraphError, MultiplexGraph,
    SampleTree,
};
use ndarray::Array2;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn single_type_graph(n: usize, edges: &[(u16, u32, u32)], undirected: bool) -> MultiplexGraph {
    graph_from_parts(
        vec![0; n],
        vec!["t".into()],
        (0..edges.iter().map(|e| e.0).max().unwrap_or(0) + 1)
            .map(|i| format!("e{i}"))
            .collect(),
        edges.to_vec(),
        vec![Array2::zeros((n, 1))],
        undirected,
    )
    .unwrap()
}

fn random_multiplex(n: usize, relations: u16, p: f64, seed: u64) -> MultiplexGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for r in 0..relations {
        for a in 0..n as u32 {
            for b in (a + 1)..n as u32 {
                if rng.random_bool(p) {
                    edges.push((r, a, b));
                }
            }
        }
    }
    single_type_graph(n, &edges, true)
}

#[test]
fn relation_view_exposes_only_its_edges() {
    let g = single_type_graph(4, &[(0, 0, 1), (0, 1, 2), (1, 2, 3)], true);
    let v0 = g.relation_view(0).unwrap();
    let v1 = g.relation_view(1).unwrap();
    assert_eq!(v0.edge_count(), 2);
    assert_eq!(v1.edge_count(), 1);
    // node 3 is isolated on relation 0 but still present in the view
    assert!(v0.contains(3));
    assert!(v0.neighbors(3).is_empty());
    assert!(g.relation_view(7).is_err());
}

#[test]
fn wrong_typed_node_is_absent_from_view() {
    // types: 0,1 are `a`; 2 is `b`; relation (a, e0, a)
    let g = graph_from_parts(
        vec![0, 0, 1],
        vec!["a".into(), "b".into()],
        vec!["e0".into()],
        vec![(0, 0, 1)],
        vec![Array2::zeros((2, 1)), Array2::zeros((1, 1))],
        true,
    )
    .unwrap();
    let view = g.relation_view(0).unwrap();
    assert!(view.contains(0));
    assert!(!view.contains(2));
    assert_eq!(view.nodes().collect::<Vec<_>>(), vec![0, 1]);
}

#[test]
fn forward_and_reverse_incidence_are_transposes() {
    let g = random_multiplex(25, 3, 0.15, 11);
    for r in 0..g.relation_count() as u16 {
        for v in 0..g.node_count() as u32 {
            for &u in g.out_neighbors(v, r) {
                assert!(g.in_neighbors(u, r).binary_search(&v).is_ok());
            }
            for &u in g.in_neighbors(v, r) {
                assert!(g.out_neighbors(u, r).binary_search(&v).is_ok());
            }
        }
    }
}

#[test]
fn every_view_edge_matches_relation_types() {
    let g = graph_from_parts(
        vec![0, 0, 1, 1],
        vec!["a".into(), "b".into()],
        vec!["x".into(), "y".into()],
        vec![(0, 0, 2), (0, 1, 3), (1, 0, 1), (1, 2, 3)],
        vec![Array2::zeros((2, 1)), Array2::zeros((2, 1))],
        false,
    )
    .unwrap();
    for rel in g.relations() {
        let view = g.relation_view(rel.relation_id).unwrap();
        for v in view.nodes() {
            for &u in view.out_neighbors(v) {
                assert_eq!(g.node_type(v), rel.src_type);
                assert_eq!(g.node_type(u), rel.dst_type);
            }
        }
    }
}

#[test]
fn single_neighbor_sample_repeats_it() {
    let g = single_type_graph(2, &[(0, 0, 1)], true);
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let sample = sample_neighborhood(&g, 0, 0, 5, &mut rng).unwrap();
    assert_eq!(sample, vec![1, 1, 1, 1, 1]);
}

#[test]
fn empty_neighborhood_yields_empty_sample() {
    let g = single_type_graph(3, &[(0, 0, 1)], true);
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let sample = sample_neighborhood(&g, 2, 0, 5, &mut rng).unwrap();
    assert!(sample.is_empty());
}

#[test]
fn zero_sample_size_is_an_error() {
    let g = single_type_graph(2, &[(0, 0, 1)], true);
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    assert!(matches!(
        sample_neighborhood(&g, 0, 0, 0, &mut rng),
        Err(GraphError::ZeroSampleSize)
    ));
}

proptest! {
    #[test]
    fn sampling_is_deterministic_per_seed(seed in 0u64..500, size in 1usize..12) {
        let g = random_multiplex(12, 2, 0.3, 3);
        let mut rng_a = ChaCha8Rng::seed_from_u64(seed);
        let mut rng_b = ChaCha8Rng::seed_from_u64(seed);
        let a = sample_neighborhood(&g, 3, 1, size, &mut rng_a).unwrap();
        let b = sample_neighborhood(&g, 3, 1, size, &mut rng_b).unwrap();
        prop_assert_eq!(a, b);
    }
}

#[test]
fn k1_tree_has_per_relation_multisets() {
    let g = random_multiplex(8, 2, 0.4, 5);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let tree = build_k_level_sample(&g, 0, 1, &[3], &mut rng).unwrap();
    assert_eq!(tree.levels, 1);
    assert_eq!(tree.children.len(), 2);
    for multiset in &tree.children {
        assert!(multiset.len() <= 3);
        for child in multiset {
            assert_eq!(child.levels, 0);
            assert!(child.children.is_empty());
        }
    }
}

#[test]
fn k2_tree_on_path_graph_reaches_two_hops() {
    // path 0 - 1 - 2 - 3
    let g = single_type_graph(4, &[(0, 0, 1), (0, 1, 2), (0, 2, 3)], true);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let tree = build_k_level_sample(&g, 0, 2, &[4, 4], &mut rng).unwrap();
    // level-1 samples are neighbors of the target
    for child in &tree.children[0] {
        assert!(g.sym_neighbors(0, 0).contains(&child.node));
        // level-2 samples are neighbors of the level-1 node
        for grand in &child.children[0] {
            assert!(g.sym_neighbors(child.node, 0).contains(&grand.node));
        }
    }
    // node 1 is 0's only neighbor; its neighbors are 0 and 2
    let grand_nodes: Vec<u32> = tree.children[0]
        .iter()
        .flat_map(|c| c.children[0].iter().map(|gc| gc.node))
        .collect();
    assert!(grand_nodes.iter().all(|&u| u == 0 || u == 2));
}

#[test]
fn zero_levels_is_an_error() {
    let g = single_type_graph(2, &[(0, 0, 1)], true);
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    assert!(matches!(
        build_k_level_sample(&g, 0, 0, &[], &mut rng),
        Err(GraphError::ZeroLevels)
    ));
}

fn every_sampled_child_is_a_neighbor(g: &MultiplexGraph, tree: &SampleTree) {
    for (r, multiset) in tree.children.iter().enumerate() {
        for child in multiset {
            assert!(
                g.aggregation_neighbors(tree.node, r as u16)
                    .contains(&child.node),
                "sampled node must be a relation-{r} neighbor of its parent"
            );
            every_sampled_child_is_a_neighbor(g, child);
        }
    }
}

#[test]
fn sampled_node_count_respects_budget_bound() {
    // bound: sum over k of (|R| * budget)^k
    for seed in 0..10u64 {
        let g = random_multiplex(15, 2, 0.25, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed + 100);
        let budgets = [3usize, 2];
        let k = budgets.len();
        let tree = build_k_level_sample(&g, (seed % 15) as u32, k, &budgets, &mut rng).unwrap();
        every_sampled_child_is_a_neighbor(&g, &tree);
        let r = g.relation_count();
        let bound: usize = (1..=k)
            .map(|lvl| {
                (1..=lvl)
                    .map(|j| r * budgets[j - 1])
                    .product::<usize>()
            })
            .sum();
        assert!(
            tree.sampled_count() <= bound,
            "{} > {}",
            tree.sampled_count(),
            bound
        );
    }
}
