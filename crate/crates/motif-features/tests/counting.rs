use graph_core::{graph_from_parts, MultiplexGraph};
use motif_features::{
    brute_force_motif_oracle, combine_features, count_all_nodes, count_motifs_node,
    motif_feature_matrix, FeatureMatrix, Motif, MotifError, MOTIF_COUNT,
};
use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn layer_graph(n: usize, edges: &[(u32, u32)]) -> MultiplexGraph {
    let typed: Vec<(u16, u32, u32)> = edges.iter().map(|&(a, b)| (0, a, b)).collect();
    graph_from_parts(
        vec![0; n],
        vec!["t".into()],
        vec!["e0".into()],
        typed,
        vec![Array2::zeros((n, 1))],
        true,
    )
    .unwrap()
}

fn counts_of(g: &MultiplexGraph, v: u32) -> [u64; MOTIF_COUNT] {
    count_motifs_node(&g.relation_view(0).unwrap(), v).counts
}

fn expect(entries: &[(Motif, u64)]) -> [u64; MOTIF_COUNT] {
    let mut out = [0u64; MOTIF_COUNT];
    for &(m, c) in entries {
        out[m as usize] = c;
    }
    out
}

#[test]
fn triangle_counts() {
    let g = layer_graph(3, &[(0, 1), (0, 2), (1, 2)]);
    for v in 0..3 {
        assert_eq!(
            counts_of(&g, v),
            expect(&[(Motif::Edge, 2), (Motif::Triangle, 1)])
        );
    }
}

#[test]
fn path3_counts() {
    let g = layer_graph(3, &[(0, 1), (1, 2)]);
    assert_eq!(
        counts_of(&g, 1),
        expect(&[(Motif::Edge, 2), (Motif::Path3, 1)])
    );
    for v in [0, 2] {
        assert_eq!(
            counts_of(&g, v),
            expect(&[(Motif::Edge, 1), (Motif::Path3, 1)])
        );
    }
}

#[test]
fn cycle4_counts() {
    // expected values frozen from the exhaustive oracle on C4
    let g = layer_graph(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
    let expected = expect(&[(Motif::Edge, 2), (Motif::Path3, 3), (Motif::Cycle4, 1)]);
    let view = g.relation_view(0).unwrap();
    for v in 0..4 {
        assert_eq!(counts_of(&g, v), expected);
        assert_eq!(brute_force_motif_oracle(&view, v).unwrap().counts, expected);
    }
}

#[test]
fn clique4_counts() {
    // expected values frozen from the exhaustive oracle on K4
    let g = layer_graph(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
    let expected = expect(&[
        (Motif::Edge, 3),
        (Motif::Triangle, 3),
        (Motif::Clique4, 1),
    ]);
    let view = g.relation_view(0).unwrap();
    for v in 0..4 {
        assert_eq!(counts_of(&g, v), expected);
        assert_eq!(brute_force_motif_oracle(&view, v).unwrap().counts, expected);
    }
}

#[test]
fn isolated_node_has_zero_counts() {
    let g = layer_graph(3, &[(0, 1)]);
    assert_eq!(counts_of(&g, 2), [0; MOTIF_COUNT]);
}

fn random_layer(n: usize, p: f64, seed: u64) -> MultiplexGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for a in 0..n as u32 {
        for b in (a + 1)..n as u32 {
            if rng.random_bool(p) {
                edges.push((a, b));
            }
        }
    }
    layer_graph(n, &edges)
}

#[test]
fn kernel_matches_oracle_on_random_layers() {
    let mut checked = 0;
    for (i, &p) in [0.1, 0.3].iter().enumerate() {
        for seed in 0..25u64 {
            let g = random_layer(20, p, seed * 10 + i as u64);
            let view = g.relation_view(0).unwrap();
            let all = count_all_nodes(&view);
            for v in 0..20u32 {
                let oracle = brute_force_motif_oracle(&view, v).unwrap();
                let single = count_motifs_node(&view, v);
                assert_eq!(single.counts, oracle.counts, "node {v} seed {seed} p {p}");
                assert_eq!(all[v as usize].counts, oracle.counts);
                checked += 1;
            }
        }
    }
    assert_eq!(checked, 2 * 25 * 20);
}

#[test]
fn oracle_guard_rejects_large_views() {
    let g = layer_graph(201, &[(0, 1)]);
    let view = g.relation_view(0).unwrap();
    assert!(matches!(
        brute_force_motif_oracle(&view, 0),
        Err(MotifError::ViewTooLarge { nodes: 201, .. })
    ));
}

#[test]
fn relabeling_permutes_count_vectors() {
    let g = random_layer(12, 0.3, 42);
    // relabel v -> (v + 5) % 12
    let perm = |v: u32| (v + 5) % 12;
    let mut edges = Vec::new();
    for v in 0..12u32 {
        for &u in g.sym_neighbors(v, 0) {
            if v < u {
                edges.push((perm(v), perm(u)));
            }
        }
    }
    let h = layer_graph(12, &edges);
    for v in 0..12u32 {
        assert_eq!(counts_of(&g, v), counts_of(&h, perm(v)));
    }
}

#[test]
fn adding_an_edge_never_decreases_endpoint_edge_counts() {
    let base = random_layer(10, 0.2, 7);
    let mut edges = Vec::new();
    for v in 0..10u32 {
        for &u in base.sym_neighbors(v, 0) {
            if v < u {
                edges.push((v, u));
            }
        }
    }
    let missing = (0..10u32)
        .flat_map(|a| ((a + 1)..10).map(move |b| (a, b)))
        .find(|&(a, b)| !base.has_edge(a, b, 0))
        .expect("sparse graph has a non-edge");
    let before_a = counts_of(&base, missing.0);
    let before_b = counts_of(&base, missing.1);
    edges.push(missing);
    let bigger = layer_graph(10, &edges);
    assert!(counts_of(&bigger, missing.0)[Motif::Edge as usize] > before_a[Motif::Edge as usize]);
    assert!(counts_of(&bigger, missing.1)[Motif::Edge as usize] > before_b[Motif::Edge as usize]);
}

#[test]
fn edge_column_equals_layer_degree() {
    let g = random_layer(15, 0.25, 3);
    let view = g.relation_view(0).unwrap();
    for counts in count_all_nodes(&view) {
        assert_eq!(
            counts.counts[Motif::Edge as usize],
            view.degree(counts.node) as u64
        );
    }
}

fn two_layer_graph(n: usize, l0: &[(u32, u32)], l1: &[(u32, u32)]) -> MultiplexGraph {
    let mut typed: Vec<(u16, u32, u32)> = l0.iter().map(|&(a, b)| (0, a, b)).collect();
    typed.extend(l1.iter().map(|&(a, b)| (1, a, b)));
    graph_from_parts(
        vec![0; n],
        vec!["t".into()],
        vec!["e0".into(), "e1".into()],
        typed,
        vec![Array2::zeros((n, 1))],
        true,
    )
    .unwrap()
}

#[test]
fn matrix_blocks_follow_relations_and_scaling() {
    let g = two_layer_graph(4, &[(0, 1), (1, 2), (2, 3), (3, 0)], &[(0, 1)]);
    let m = motif_feature_matrix(&g).unwrap();
    assert_eq!(m.cols(), 18);
    assert_eq!(m.rows(), 4);
    assert_eq!(m.headers[0], "motif:r0:edge");
    assert_eq!(m.headers[9], "motif:r1:edge");
    // C4 layer: degree 2 everywhere -> log(3); layer 1: only edge (0,1)
    for v in 0..4 {
        assert!((m.data[(v, 0)] - 3.0_f64.ln()).abs() < 1e-12);
    }
    assert!((m.data[(0, 9)] - 2.0_f64.ln()).abs() < 1e-12);
    assert_eq!(m.data[(2, 9)], 0.0);
    // empty columns for motifs absent from layer 1
    for v in 0..4 {
        for j in 10..18 {
            assert_eq!(m.data[(v, j)], 0.0);
        }
    }
}

#[test]
fn empty_second_layer_yields_zero_block() {
    // layer e1 exists in the type universe but has no edges: represent by
    // building a graph with one real layer and checking only the r0 block.
    let g = two_layer_graph(3, &[(0, 1), (1, 2)], &[(0, 0)]);
    // the self-loop-only layer symmetrizes to an empty simple layer
    let m = motif_feature_matrix(&g).unwrap();
    for v in 0..3 {
        for j in 9..18 {
            assert_eq!(m.data[(v, j)], 0.0);
        }
    }
}

#[test]
fn combine_concatenates_columns_and_headers() {
    let given = FeatureMatrix {
        headers: vec!["given0".into(), "given1".into(), "given2".into()],
        data: Array2::zeros((4, 3)),
    };
    let g = two_layer_graph(4, &[(0, 1)], &[(2, 3)]);
    let motif = motif_feature_matrix(&g).unwrap();
    let combined = combine_features(&given, &motif).unwrap();
    assert_eq!(combined.cols(), 21);
    assert_eq!(combined.headers.len(), 21);
    assert_eq!(combined.headers[0], "given0");
    assert_eq!(combined.headers[3], "motif:r0:edge");

    let empty = FeatureMatrix {
        headers: vec![],
        data: Array2::zeros((0, 0)),
    };
    let same = combine_features(&empty, &motif).unwrap();
    assert_eq!(same, motif);

    let wrong = FeatureMatrix {
        headers: vec!["x".into()],
        data: Array2::zeros((7, 1)),
    };
    assert!(matches!(
        combine_features(&wrong, &motif),
        Err(MotifError::RowMismatch { left: 7, right: 4 })
    ));
}

#[test]
fn feature_tsv_round_trips() {
    let g = two_layer_graph(4, &[(0, 1), (1, 2)], &[(2, 3)]);
    let m = motif_feature_matrix(&g).unwrap();
    let dir = tempfile::TempDir::new().unwrap();
    let path = dir.path().join("feats.tsv");
    m.write_tsv(&path).unwrap();
    let back = FeatureMatrix::read_tsv(&path).unwrap();
    assert_eq!(back.headers, m.headers);
    assert_eq!(back.data, m.data);
}
