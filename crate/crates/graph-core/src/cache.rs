use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use ndarray::Array2;

use crate::graph::{graph_from_parts, Direction, MultiplexGraph};
use crate::{GraphError, NodeId, RelationId, Result};

/// Magic bytes of the binary graph cache.
pub const CACHE_MAGIC: [u8; 4] = *b"RHMN";
/// Current cache format version.
pub const CACHE_VERSION: u8 = 1;

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> GraphError + '_ {
    move |source| GraphError::Io {
        path: path.to_path_buf(),
        source,
    }
}

struct Writer<'a, W: Write> {
    w: &'a mut W,
}

impl<W: Write> Writer<'_, W> {
    fn u8(&mut self, v: u8) -> std::io::Result<()> {
        self.w.write_all(&[v])
    }
    fn u16(&mut self, v: u16) -> std::io::Result<()> {
        self.w.write_all(&v.to_le_bytes())
    }
    fn u32(&mut self, v: u32) -> std::io::Result<()> {
        self.w.write_all(&v.to_le_bytes())
    }
    fn u64(&mut self, v: u64) -> std::io::Result<()> {
        self.w.write_all(&v.to_le_bytes())
    }
    fn f64(&mut self, v: f64) -> std::io::Result<()> {
        self.w.write_all(&v.to_bits().to_le_bytes())
    }
    fn str(&mut self, s: &str) -> std::io::Result<()> {
        self.u16(s.len() as u16)?;
        self.w.write_all(s.as_bytes())
    }
}

struct Reader<'a, R: Read> {
    r: &'a mut R,
}

impl<R: Read> Reader<'_, R> {
    fn u8(&mut self) -> std::io::Result<u8> {
        let mut b = [0u8; 1];
        self.r.read_exact(&mut b)?;
        Ok(b[0])
    }
    fn u16(&mut self) -> std::io::Result<u16> {
        let mut b = [0u8; 2];
        self.r.read_exact(&mut b)?;
        Ok(u16::from_le_bytes(b))
    }
    fn u32(&mut self) -> std::io::Result<u32> {
        let mut b = [0u8; 4];
        self.r.read_exact(&mut b)?;
        Ok(u32::from_le_bytes(b))
    }
    fn u64(&mut self) -> std::io::Result<u64> {
        let mut b = [0u8; 8];
        self.r.read_exact(&mut b)?;
        Ok(u64::from_le_bytes(b))
    }
    fn f64(&mut self) -> std::io::Result<f64> {
        Ok(f64::from_bits(self.u64()?))
    }
    fn str(&mut self) -> std::io::Result<String> {
        let len = self.u16()? as usize;
        let mut buf = vec![0u8; len];
        self.r.read_exact(&mut buf)?;
        Ok(String::from_utf8_lossy(&buf).into_owned())
    }
}

/// Write the graph to a compact binary cache. Feature values round-trip
/// bit-exactly.
pub fn write_cache(g: &MultiplexGraph, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(io_err(path))?;
    let mut buf = BufWriter::new(file);
    let mut w = Writer { w: &mut buf };
    let (type_names, edge_names, node_types, relations, features, directions, undirected) =
        g.parts();

    let mut inner = || -> std::io::Result<()> {
        w.w.write_all(&CACHE_MAGIC)?;
        w.u8(CACHE_VERSION)?;
        w.u8(u8::from(undirected))?;
        w.u32(node_types.len() as u32)?;
        w.u16(type_names.len() as u16)?;
        w.u16(edge_names.len() as u16)?;
        w.u16(relations.len() as u16)?;
        for name in type_names {
            w.str(name)?;
        }
        for name in edge_names {
            w.str(name)?;
        }
        for &t in node_types {
            w.u16(t)?;
        }
        for rel in relations {
            w.u16(rel.src_type)?;
            w.u16(rel.edge_type)?;
            w.u16(rel.dst_type)?;
        }
        for r in 0..relations.len() as RelationId {
            let mut pairs = Vec::new();
            for v in 0..node_types.len() as NodeId {
                for &u in g.out_neighbors(v, r) {
                    pairs.push((v, u));
                }
            }
            w.u64(pairs.len() as u64)?;
            for (s, d) in pairs {
                w.u32(s)?;
                w.u32(d)?;
            }
        }
        for mat in features {
            w.u32(mat.nrows() as u32)?;
            w.u32(mat.ncols() as u32)?;
            for &x in mat.iter() {
                w.f64(x)?;
            }
        }
        for &d in directions {
            w.u8(match d {
                Direction::Out => 0,
                Direction::In => 1,
                Direction::Undirected => 2,
            })?;
        }
        Ok(())
    };
    inner().map_err(io_err(path))?;
    buf.flush().map_err(io_err(path))
}

/// Read a graph back from a binary cache produced by [`write_cache`].
pub fn read_cache(path: &Path) -> Result<MultiplexGraph> {
    let file = File::open(path).map_err(io_err(path))?;
    let mut buf = BufReader::new(file);
    let mut r = Reader { r: &mut buf };

    let mut magic = [0u8; 4];
    r.r.read_exact(&mut magic).map_err(io_err(path))?;
    if magic != CACHE_MAGIC {
        return Err(GraphError::Cache(format!(
            "bad magic {magic:?}, expected {CACHE_MAGIC:?}"
        )));
    }
    let inner = |r: &mut Reader<BufReader<File>>| -> std::io::Result<Result<MultiplexGraph>> {
        let version = r.u8()?;
        if version != CACHE_VERSION {
            return Ok(Err(GraphError::Cache(format!(
                "unsupported version {version}"
            ))));
        }
        let undirected = r.u8()? != 0;
        let node_count = r.u32()? as usize;
        let type_count = r.u16()? as usize;
        let edge_type_count = r.u16()? as usize;
        let relation_count = r.u16()? as usize;
        let mut type_names = Vec::with_capacity(type_count);
        for _ in 0..type_count {
            type_names.push(r.str()?);
        }
        let mut edge_names = Vec::with_capacity(edge_type_count);
        for _ in 0..edge_type_count {
            edge_names.push(r.str()?);
        }
        let mut node_types = Vec::with_capacity(node_count);
        for _ in 0..node_count {
            node_types.push(r.u16()?);
        }
        let mut rel_edge_types = Vec::with_capacity(relation_count);
        for _ in 0..relation_count {
            let _src = r.u16()?;
            let edge_type = r.u16()?;
            let _dst = r.u16()?;
            rel_edge_types.push(edge_type);
        }
        let mut edges = Vec::new();
        for rel_edge_type in &rel_edge_types {
            let pair_count = r.u64()? as usize;
            for _ in 0..pair_count {
                let s = r.u32()?;
                let d = r.u32()?;
                edges.push((*rel_edge_type, s, d));
            }
        }
        let mut features = Vec::with_capacity(type_count);
        for _ in 0..type_count {
            let rows = r.u32()? as usize;
            let cols = r.u32()? as usize;
            let mut mat = Array2::zeros((rows, cols));
            for i in 0..rows {
                for j in 0..cols {
                    mat[(i, j)] = r.f64()?;
                }
            }
            features.push(mat);
        }
        let mut directions = Vec::with_capacity(relation_count);
        for _ in 0..relation_count {
            directions.push(match r.u8()? {
                0 => Direction::Out,
                1 => Direction::In,
                _ => Direction::Undirected,
            });
        }

        // Rebuilding re-derives relations; mirroring is idempotent on the
        // already-mirrored pair set.
        let mut g = match graph_from_parts(
            node_types,
            type_names,
            edge_names,
            edges,
            features,
            undirected,
        ) {
            Ok(g) => g,
            Err(e) => return Ok(Err(e)),
        };
        for (i, d) in directions.into_iter().enumerate() {
            g = g.with_relation_direction(i as RelationId, d);
        }
        Ok(Ok(g))
    };
    inner(&mut r).map_err(io_err(path))?
}
