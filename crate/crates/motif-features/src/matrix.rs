use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use graph_core::{MultiplexGraph, NodeId, RelationId};
use ndarray::Array2;
use rayon::prelude::*;

use crate::catalog::{Motif, MOTIF_COUNT};
use crate::count::{count_all_nodes, MotifCountVector};
use crate::{MotifError, Result};

/// A dense node-by-column feature table with named columns.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    pub headers: Vec<String>,
    pub data: Array2<f64>,
}

impl FeatureMatrix {
    pub fn rows(&self) -> usize {
        self.data.nrows()
    }

    pub fn cols(&self) -> usize {
        self.data.ncols()
    }

    /// Write as TSV with a `#node <col-names...>` header line.
    pub fn write_tsv(&self, path: &Path) -> Result<()> {
        let io = |source| MotifError::Io {
            path: path.to_path_buf(),
            source,
        };
        let file = std::fs::File::create(path).map_err(io)?;
        let mut w = BufWriter::new(file);
        let mut inner = || -> std::io::Result<()> {
            write!(w, "#node")?;
            for h in &self.headers {
                write!(w, "\t{h}")?;
            }
            writeln!(w)?;
            for v in 0..self.rows() {
                write!(w, "{v}")?;
                for j in 0..self.cols() {
                    write!(w, "\t{}", self.data[(v, j)])?;
                }
                writeln!(w)?;
            }
            w.flush()
        };
        inner().map_err(io)
    }

    /// Read a TSV written by [`FeatureMatrix::write_tsv`], or a headerless
    /// `node_id v1 v2 ...` file (columns then named `given0..`).
    pub fn read_tsv(path: &Path) -> Result<FeatureMatrix> {
        let io = |source| MotifError::Io {
            path: path.to_path_buf(),
            source,
        };
        let file = std::fs::File::open(path).map_err(io)?;
        let reader = BufReader::new(file);
        let mut headers: Option<Vec<String>> = None;
        let mut rows: Vec<(usize, Vec<f64>)> = Vec::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line.map_err(io)?;
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            if let Some(rest) = trimmed.strip_prefix("#node") {
                headers = Some(rest.split_whitespace().map(String::from).collect());
                continue;
            }
            if trimmed.starts_with('#') {
                continue;
            }
            let mut it = trimmed.split_whitespace();
            let id: usize = it
                .next()
                .unwrap()
                .parse()
                .map_err(|_| MotifError::Parse {
                    path: path.to_path_buf(),
                    line: i + 1,
                    msg: "expected integer node id".into(),
                })?;
            let values: std::result::Result<Vec<f64>, _> =
                it.map(|tok| tok.parse::<f64>()).collect();
            let values = values.map_err(|_| MotifError::Parse {
                path: path.to_path_buf(),
                line: i + 1,
                msg: "expected float feature values".into(),
            })?;
            rows.push((id, values));
        }
        let n = rows.iter().map(|(id, _)| id + 1).max().unwrap_or(0);
        let dim = rows.first().map(|(_, v)| v.len()).unwrap_or(0);
        for (id, values) in &rows {
            if values.len() != dim {
                return Err(MotifError::Parse {
                    path: path.to_path_buf(),
                    line: 0,
                    msg: format!("inconsistent column count for node {id}"),
                });
            }
        }
        let mut data = Array2::zeros((n, dim));
        for (id, values) in rows {
            for (j, x) in values.into_iter().enumerate() {
                data[(id, j)] = x;
            }
        }
        let headers =
            headers.unwrap_or_else(|| (0..dim).map(|j| format!("given{j}")).collect());
        Ok(FeatureMatrix { headers, data })
    }
}

/// Raw per-layer motif counts for every node, relation-major.
pub fn raw_motif_counts(g: &MultiplexGraph) -> Result<Vec<Vec<MotifCountVector>>> {
    let relation_ids: Vec<RelationId> = (0..g.relation_count() as RelationId).collect();
    relation_ids
        .par_iter()
        .map(|&r| {
            let view = g.relation_view(r)?;
            Ok(count_all_nodes(&view))
        })
        .collect()
}

/// The |V| x (9 |R|) structural feature matrix: per relation block, per motif
/// column, log(1 + count)-scaled. Column order is relation-major, catalog
/// order within each block.
pub fn motif_feature_matrix(g: &MultiplexGraph) -> Result<FeatureMatrix> {
    let per_relation = raw_motif_counts(g)?;
    let n = g.node_count();
    let r_count = g.relation_count();
    let mut data = Array2::zeros((n, MOTIF_COUNT * r_count));
    let mut headers = Vec::with_capacity(MOTIF_COUNT * r_count);
    for r in 0..r_count {
        for motif in Motif::ALL {
            headers.push(format!("motif:r{r}:{}", motif.name()));
        }
        for counts in &per_relation[r] {
            for (m, &c) in counts.counts.iter().enumerate() {
                data[(counts.node as usize, r * MOTIF_COUNT + m)] = (1.0 + c as f64).ln();
            }
        }
    }
    Ok(FeatureMatrix { headers, data })
}

/// Column-wise concatenation of given and structural features with a merged
/// header; rows must align on node id.
pub fn combine_features(given: &FeatureMatrix, motif: &FeatureMatrix) -> Result<FeatureMatrix> {
    if given.rows() != motif.rows() && given.rows() != 0 {
        return Err(MotifError::RowMismatch {
            left: given.rows(),
            right: motif.rows(),
        });
    }
    if given.rows() == 0 || given.cols() == 0 {
        return Ok(motif.clone());
    }
    let rows = motif.rows();
    let cols = given.cols() + motif.cols();
    let mut data = Array2::zeros((rows, cols));
    for v in 0..rows {
        for j in 0..given.cols() {
            data[(v, j)] = given.data[(v, j)];
        }
        for j in 0..motif.cols() {
            data[(v, given.cols() + j)] = motif.data[(v, j)];
        }
    }
    let mut headers = given.headers.clone();
    headers.extend(motif.headers.iter().cloned());
    Ok(FeatureMatrix { headers, data })
}

/// Split a |V|-row feature matrix into per-node-type matrices whose row
/// order matches the graph's type membership, ready for
/// [`MultiplexGraph::with_features`].
pub fn split_by_type(g: &MultiplexGraph, features: &FeatureMatrix) -> Vec<Array2<f64>> {
    (0..g.node_type_count() as u16)
        .map(|t| {
            let members = g.nodes_of_type(t);
            let mut mat = Array2::zeros((members.len(), features.cols()));
            for (i, &v) in members.iter().enumerate() {
                for j in 0..features.cols() {
                    mat[(i, j)] = features.data[(v as usize, j)];
                }
            }
            mat
        })
        .collect()
}

/// Convenience: the raw (unscaled) count for one node/relation/motif.
pub fn raw_count(counts: &[Vec<MotifCountVector>], r: RelationId, v: NodeId, m: Motif) -> u64 {
    counts[r as usize][v as usize].counts[m as usize]
}
