use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};

use ndarray::Array2;

use crate::graph::{GraphBuilder, MultiplexGraph};
use crate::{GraphError, NodeId, Result};

/// Ingestion switches.
#[derive(Debug, Clone, Default)]
pub struct LoadOptions {
    /// Mirror every edge so each layer becomes symmetric.
    pub undirected: bool,
    /// Fill missing feature rows with zeros instead of rejecting the input.
    pub zero_fill_missing: bool,
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|source| GraphError::Io {
            path: path.to_path_buf(),
            source,
        })
}

fn read_lines(path: &Path) -> Result<Vec<(usize, String)>> {
    let reader = open(path)?;
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|source| GraphError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        out.push((i + 1, trimmed.to_string()));
    }
    Ok(out)
}

fn parse_id(tok: &str, path: &Path, line: usize) -> Result<u64> {
    tok.parse::<u64>().map_err(|_| GraphError::Parse {
        path: path.to_path_buf(),
        line,
        msg: format!("expected an integer node id, got `{tok}`"),
    })
}

/// Load a multiplex graph from plain-text files.
///
/// * node-type file: rows `node_id node_type_name`, ids covering `0..|V|`
/// * edge list: rows `edge_type_name src_id dst_id`
/// * one feature file per node type: rows `node_id v1 v2 ...`
///
/// Relations are derived as the distinct (source type, edge type,
/// destination type) triples observed after optional mirroring.
pub fn load_graph(
    edge_list_path: &Path,
    node_type_path: &Path,
    feature_paths: &HashMap<String, PathBuf>,
    opts: &LoadOptions,
) -> Result<MultiplexGraph> {
    let mut builder = GraphBuilder::new().undirected(opts.undirected);

    // Node types first: they define the node universe.
    let type_rows = read_lines(node_type_path)?;
    let node_count = type_rows.len();
    let mut seen = vec![false; node_count];
    for &(line, ref row) in &type_rows {
        let mut it = row.split_whitespace();
        let (id_tok, name) = match (it.next(), it.next()) {
            (Some(a), Some(b)) => (a, b),
            _ => {
                return Err(GraphError::Parse {
                    path: node_type_path.to_path_buf(),
                    line,
                    msg: "expected `node_id node_type_name`".into(),
                })
            }
        };
        let id = parse_id(id_tok, node_type_path, line)?;
        if id >= node_count as u64 {
            return Err(GraphError::NonDenseNodeIds {
                expected: node_count,
                id,
            });
        }
        if seen[id as usize] {
            return Err(GraphError::DuplicateNode(id));
        }
        seen[id as usize] = true;
        let t = builder.node_type_id(name);
        builder.set_node_type(id as NodeId, t);
    }

    for &(line, ref row) in &read_lines(edge_list_path)? {
        let mut it = row.split_whitespace();
        let (name, src_tok, dst_tok) = match (it.next(), it.next(), it.next()) {
            (Some(a), Some(b), Some(c)) => (a, b, c),
            _ => {
                return Err(GraphError::Parse {
                    path: edge_list_path.to_path_buf(),
                    line,
                    msg: "expected `edge_type src dst`".into(),
                })
            }
        };
        let src = parse_id(src_tok, edge_list_path, line)?;
        let dst = parse_id(dst_tok, edge_list_path, line)?;
        for id in [src, dst] {
            if id >= node_count as u64 {
                return Err(GraphError::UnknownNode {
                    path: edge_list_path.to_path_buf(),
                    line,
                    id,
                    node_count,
                });
            }
        }
        let e = builder.edge_type_id(name);
        builder.add_edge(e, src as NodeId, dst as NodeId);
    }

    let type_count = builder.type_name_count();
    let mut members: Vec<Vec<NodeId>> = vec![Vec::new(); type_count];
    for v in 0..node_count as NodeId {
        members[builder.node_type_of(v) as usize].push(v);
    }

    let mut features = Vec::new();
    for (t, member_list) in members.iter().enumerate() {
        let type_name = builder.type_name(t).to_string();
        let path = feature_paths
            .get(&type_name)
            .ok_or_else(|| GraphError::MissingFeatureFile {
                type_name: type_name.clone(),
            })?;
        features.push(read_feature_file(
            path,
            &type_name,
            member_list,
            node_count,
            opts.zero_fill_missing,
        )?);
    }

    builder.build(features)
}

fn read_feature_file(
    path: &Path,
    type_name: &str,
    members: &[NodeId],
    node_count: usize,
    zero_fill: bool,
) -> Result<Array2<f64>> {
    let mut rows: HashMap<NodeId, Vec<f64>> = HashMap::new();
    let mut dim: Option<usize> = None;
    for &(line, ref row) in &read_lines(path)? {
        let mut it = row.split_whitespace();
        let id_tok = it.next().expect("non-empty line");
        let id = parse_id(id_tok, path, line)?;
        if id >= node_count as u64 {
            return Err(GraphError::UnknownNode {
                path: path.to_path_buf(),
                line,
                id,
                node_count,
            });
        }
        let mut values = Vec::new();
        for tok in it {
            values.push(tok.parse::<f64>().map_err(|_| GraphError::Parse {
                path: path.to_path_buf(),
                line,
                msg: format!("expected a float, got `{tok}`"),
            })?);
        }
        match dim {
            None => dim = Some(values.len()),
            Some(d) if d != values.len() => {
                return Err(GraphError::FeatureDimMismatch {
                    type_name: type_name.to_string(),
                    expected: d,
                    found: values.len(),
                    path: path.to_path_buf(),
                    line,
                });
            }
            _ => {}
        }
        rows.insert(id as NodeId, values);
    }
    let dim = dim.unwrap_or(0);
    let mut matrix = Array2::zeros((members.len(), dim));
    for (i, &v) in members.iter().enumerate() {
        match rows.get(&v) {
            Some(values) => {
                for (j, &x) in values.iter().enumerate() {
                    matrix[(i, j)] = x;
                }
            }
            None if zero_fill => {}
            None => {
                return Err(GraphError::MissingFeatureRow {
                    node: v,
                    type_name: type_name.to_string(),
                });
            }
        }
    }
    Ok(matrix)
}
