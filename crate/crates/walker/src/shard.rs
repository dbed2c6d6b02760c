use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use graph_core::RelationId;

use crate::walk::{Walk, WalkCorpus};
use crate::{Result, WalkError};

fn shard_name(r: RelationId) -> String {
    format!("walks_r{r}.bin")
}

/// Write the corpus as one binary shard per relation. Record layout:
/// relation id (u16 LE), walk length (u16 LE), then that many node ids
/// (u32 LE each).
pub fn save_shards(corpus: &WalkCorpus, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|source| WalkError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    for r in 0..corpus.relation_count as RelationId {
        let path = dir.join(shard_name(r));
        let io = |source| WalkError::Io {
            path: path.clone(),
            source,
        };
        let mut w = BufWriter::new(File::create(&path).map_err(io)?);
        let mut inner = || -> std::io::Result<()> {
            for walk in corpus.walks.iter().filter(|walk| walk.relation == r) {
                w.write_all(&walk.relation.to_le_bytes())?;
                w.write_all(&(walk.nodes.len() as u16).to_le_bytes())?;
                for &v in &walk.nodes {
                    w.write_all(&v.to_le_bytes())?;
                }
            }
            w.flush()
        };
        inner().map_err(io)?;
    }
    Ok(())
}

/// Read every `walks_r*.bin` shard in `dir` back into a corpus. The
/// truncation flag is not part of the wire format and resets to false.
pub fn load_shards(dir: &Path, relation_count: usize) -> Result<WalkCorpus> {
    let mut walks = Vec::new();
    for r in 0..relation_count as RelationId {
        let path = dir.join(shard_name(r));
        let io = |source| WalkError::Io {
            path: path.clone(),
            source,
        };
        let mut reader = BufReader::new(File::open(&path).map_err(io)?);
        loop {
            let mut head = [0u8; 2];
            match reader.read_exact(&mut head) {
                Ok(()) => {}
                Err(e) if e.kind() == std::io::ErrorKind::UnexpectedEof => break,
                Err(e) => return Err(io(e)),
            }
            let relation = u16::from_le_bytes(head);
            if relation != r {
                return Err(WalkError::Shard {
                    path: path.clone(),
                    msg: format!("record tagged relation {relation} in shard {r}"),
                });
            }
            let mut len_buf = [0u8; 2];
            reader.read_exact(&mut len_buf).map_err(io)?;
            let len = u16::from_le_bytes(len_buf) as usize;
            let mut nodes = Vec::with_capacity(len);
            for _ in 0..len {
                let mut id = [0u8; 4];
                reader.read_exact(&mut id).map_err(io)?;
                nodes.push(u32::from_le_bytes(id));
            }
            walks.push(Walk {
                relation,
                nodes,
                truncated: false,
            });
        }
    }
    Ok(WalkCorpus {
        walks,
        relation_count,
    })
}
