use std::collections::HashMap;
use std::io::Write;
use std::path::PathBuf;

use graph_core::{load_graph, read_cache, write_cache, GraphError, LoadOptions};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tempfile::TempDir;

fn write_file(dir: &TempDir, name: &str, contents: &str) -> PathBuf {
    let path = dir.path().join(name);
    let mut f = std::fs::File::create(&path).unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    path
}

fn feature_map(dir: &TempDir, entries: &[(&str, &str)]) -> HashMap<String, PathBuf> {
    entries
        .iter()
        .enumerate()
        .map(|(i, (ty, contents))| {
            (
                ty.to_string(),
                write_file(dir, &format!("feat_{i}.tsv"), contents),
            )
        })
        .collect()
}

#[test]
fn two_edge_types_between_one_pair_yield_two_relations() {
    let dir = TempDir::new().unwrap();
    let nodes = write_file(&dir, "nodes.tsv", "0 user\n1 user\n");
    let edges = write_file(&dir, "edges.tsv", "r1 0 1\nr2 0 1\n");
    let feats = feature_map(&dir, &[("user", "0 1.0\n1 2.0\n")]);

    let g = load_graph(&edges, &nodes, &feats, &LoadOptions::default()).unwrap();
    assert_eq!(g.node_count(), 2);
    assert_eq!(g.relation_count(), 2);
    assert_eq!(g.total_edges(), 2);
    assert!(g.has_edge(0, 1, 0));
    assert!(g.has_edge(0, 1, 1));
}

#[test]
fn unknown_node_id_is_rejected_with_row_number() {
    let dir = TempDir::new().unwrap();
    let mut node_rows = String::new();
    for i in 0..10 {
        node_rows.push_str(&format!("{i} t\n"));
    }
    let nodes = write_file(&dir, "nodes.tsv", &node_rows);
    let edges = write_file(&dir, "edges.tsv", "r1 0 1\nr1 3 99\n");
    let feats = feature_map(&dir, &[("t", "")]);

    let err = load_graph(&edges, &nodes, &feats, &LoadOptions::default()).unwrap_err();
    match err {
        GraphError::UnknownNode { line, id, .. } => {
            assert_eq!(line, 2);
            assert_eq!(id, 99);
        }
        other => panic!("expected UnknownNode, got {other}"),
    }
}

#[test]
fn feature_dimension_mismatch_is_rejected() {
    let dir = TempDir::new().unwrap();
    let nodes = write_file(&dir, "nodes.tsv", "0 t\n1 t\n");
    let edges = write_file(&dir, "edges.tsv", "r1 0 1\n");
    let feats = feature_map(&dir, &[("t", "0 1.0 2.0\n1 3.0\n")]);

    let err = load_graph(&edges, &nodes, &feats, &LoadOptions::default()).unwrap_err();
    assert!(matches!(err, GraphError::FeatureDimMismatch { .. }));
}

#[test]
fn missing_feature_row_rejected_unless_zero_fill() {
    let dir = TempDir::new().unwrap();
    let nodes = write_file(&dir, "nodes.tsv", "0 t\n1 t\n");
    let edges = write_file(&dir, "edges.tsv", "r1 0 1\n");
    let feats = feature_map(&dir, &[("t", "0 1.5 2.5\n")]);

    let err = load_graph(&edges, &nodes, &feats, &LoadOptions::default()).unwrap_err();
    assert!(matches!(err, GraphError::MissingFeatureRow { node: 1, .. }));

    let opts = LoadOptions {
        zero_fill_missing: true,
        ..Default::default()
    };
    let g = load_graph(&edges, &nodes, &feats, &opts).unwrap();
    assert_eq!(g.node_features(1).to_vec(), vec![0.0, 0.0]);
    assert_eq!(g.node_features(0).to_vec(), vec![1.5, 2.5]);
}

#[test]
fn undirected_flag_mirrors_edges() {
    let dir = TempDir::new().unwrap();
    let nodes = write_file(&dir, "nodes.tsv", "0 t\n1 t\n2 t\n");
    let edges = write_file(&dir, "edges.tsv", "r1 0 1\nr1 1 2\n");
    let feats = feature_map(&dir, &[("t", "0 0\n1 0\n2 0\n")]);

    let opts = LoadOptions {
        undirected: true,
        ..Default::default()
    };
    let g = load_graph(&edges, &nodes, &feats, &opts).unwrap();
    assert_eq!(g.edge_count(0), 2);
    assert!(g.has_edge(1, 0, 0));
    assert!(g.has_edge(0, 1, 0));
    assert_eq!(g.in_neighbors(1, 0), &[0, 2]);
    assert_eq!(g.out_neighbors(1, 0), &[0, 2]);
}

#[test]
fn cache_round_trip_is_bit_exact() {
    let dir = TempDir::new().unwrap();
    let nodes = write_file(&dir, "nodes.tsv", "0 a\n1 a\n2 b\n3 b\n");
    let edges = write_file(
        &dir,
        "edges.tsv",
        "likes 0 2\nlikes 1 3\nfollows 0 1\nfollows 1 0\n",
    );
    let feats = feature_map(&dir, &[("a", "0 0.125 -3.5\n1 7.25 0.1\n"), ("b", "2 9\n3 -2\n")]);

    let g = load_graph(&edges, &nodes, &feats, &LoadOptions::default()).unwrap();
    let cache_path = dir.path().join("graph.bin");
    write_cache(&g, &cache_path).unwrap();
    let g2 = read_cache(&cache_path).unwrap();

    assert_eq!(g.node_count(), g2.node_count());
    assert_eq!(g.relations(), g2.relations());
    for r in 0..g.relation_count() as u16 {
        assert_eq!(g.canonical_edges(r), g2.canonical_edges(r));
        for v in 0..g.node_count() as u32 {
            assert_eq!(g.out_neighbors(v, r), g2.out_neighbors(v, r));
            assert_eq!(g.in_neighbors(v, r), g2.in_neighbors(v, r));
        }
    }
    for v in 0..g.node_count() as u32 {
        let a = g.node_features(v);
        let b = g2.node_features(v);
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b.iter()) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
    }
    let magic = &std::fs::read(&cache_path).unwrap()[..5];
    assert_eq!(magic, b"RHMN\x01");
}

#[test]
fn tissue_ppi_shaped_input_reports_exact_counts() {
    // 4,360 nodes, 527,850 undirected edges spread over 10 relation layers.
    let n: u32 = 4_360;
    let per_layer = 52_785usize;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut edge_rows = String::with_capacity(per_layer * 10 * 16);
    for layer in 0..10 {
        let mut seen = std::collections::HashSet::with_capacity(per_layer * 2);
        while seen.len() < per_layer {
            let a = rng.random_range(0..n);
            let b = rng.random_range(0..n);
            if a == b {
                continue;
            }
            let key = (a.min(b), a.max(b));
            if seen.insert(key) {
                edge_rows.push_str(&format!("tissue{layer} {} {}\n", key.0, key.1));
            }
        }
    }
    let mut node_rows = String::with_capacity(n as usize * 12);
    let mut feat_rows = String::with_capacity(n as usize * 8);
    for v in 0..n {
        node_rows.push_str(&format!("{v} protein\n"));
        feat_rows.push_str(&format!("{v} 1\n"));
    }

    let dir = TempDir::new().unwrap();
    let nodes = write_file(&dir, "nodes.tsv", &node_rows);
    let edges = write_file(&dir, "edges.tsv", &edge_rows);
    let feats = feature_map(&dir, &[("protein", &feat_rows)]);

    let opts = LoadOptions {
        undirected: true,
        ..Default::default()
    };
    let g = load_graph(&edges, &nodes, &feats, &opts).unwrap();
    assert_eq!(g.node_count(), 4_360);
    assert_eq!(g.relation_count(), 10);
    assert_eq!(g.total_edges(), 527_850);
}
