use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use ndarray::{Array1, Array2};
use walker::NoiseKind;

use crate::config::{Activation, AttentionMode, TrainConfig};
use crate::params::{ModelMeta, ModelParameters, Tensor, TensorData};
use crate::train::TrainedModel;
use crate::{ModelError, Result};

/// Magic bytes of the parameter checkpoint format.
pub const CHECKPOINT_MAGIC: [u8; 4] = *b"MXCP";
const VERSION: u8 = 1;

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> ModelError + '_ {
    move |source| ModelError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn bad(path: &Path, msg: impl Into<String>) -> ModelError {
    ModelError::Checkpoint {
        path: path.to_path_buf(),
        msg: msg.into(),
    }
}

/// Save parameters together with the full training configuration.
pub fn save_checkpoint(model: &TrainedModel, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(io_err(path))?;
    let mut w = BufWriter::new(file);
    let cfg = &model.config;
    let meta = &model.params.meta;
    let mut inner = || -> std::io::Result<()> {
        w.write_all(&CHECKPOINT_MAGIC)?;
        w.write_all(&[VERSION])?;
        for v in [
            cfg.embedding_dim as u64,
            cfg.attention_dim as u64,
            cfg.k_levels as u64,
            cfg.walks_per_node as u64,
            cfg.walk_length as u64,
            cfg.window as u64,
            cfg.negatives as u64,
            cfg.max_epochs as u64,
            cfg.patience as u64,
            cfg.neighbor_budget as u64,
            cfg.batch_triples as u64,
            cfg.seed,
        ] {
            w.write_all(&v.to_le_bytes())?;
        }
        w.write_all(&cfg.learning_rate.to_bits().to_le_bytes())?;
        w.write_all(&[
            match cfg.activation {
                Activation::Elu => 0,
                Activation::Tanh => 1,
            },
            match cfg.noise {
                NoiseKind::Uniform => 0,
                NoiseKind::LogUniformByDegree => 1,
            },
            u8::from(cfg.per_relation_context),
            match cfg.attention {
                AttentionMode::Full => 0,
                AttentionMode::Disabled => 1,
            },
        ])?;
        for v in [meta.node_count as u64, meta.relation_count as u64] {
            w.write_all(&v.to_le_bytes())?;
        }
        w.write_all(&(meta.input_dims.len() as u32).to_le_bytes())?;
        for &dim in &meta.input_dims {
            w.write_all(&(dim as u64).to_le_bytes())?;
        }
        w.write_all(&(model.params.tensors.len() as u32).to_le_bytes())?;
        for tensor in &model.params.tensors {
            let name = tensor.name.as_bytes();
            w.write_all(&(name.len() as u16).to_le_bytes())?;
            w.write_all(name)?;
            match &tensor.data {
                TensorData::Mat(m) => {
                    w.write_all(&[0u8])?;
                    w.write_all(&(m.nrows() as u32).to_le_bytes())?;
                    w.write_all(&(m.ncols() as u32).to_le_bytes())?;
                    for &x in m.iter() {
                        w.write_all(&x.to_bits().to_le_bytes())?;
                    }
                }
                TensorData::Vec1(v) => {
                    w.write_all(&[1u8])?;
                    w.write_all(&(v.len() as u32).to_le_bytes())?;
                    for &x in v.iter() {
                        w.write_all(&x.to_bits().to_le_bytes())?;
                    }
                }
            }
        }
        w.flush()
    };
    inner().map_err(io_err(path))
}

struct R<'a> {
    inner: BufReader<File>,
    path: &'a Path,
}

impl R<'_> {
    fn u8(&mut self) -> Result<u8> {
        let mut b = [0u8; 1];
        self.inner.read_exact(&mut b).map_err(io_err(self.path))?;
        Ok(b[0])
    }
    fn u16(&mut self) -> Result<u16> {
        let mut b = [0u8; 2];
        self.inner.read_exact(&mut b).map_err(io_err(self.path))?;
        Ok(u16::from_le_bytes(b))
    }
    fn u32(&mut self) -> Result<u32> {
        let mut b = [0u8; 4];
        self.inner.read_exact(&mut b).map_err(io_err(self.path))?;
        Ok(u32::from_le_bytes(b))
    }
    fn u64(&mut self) -> Result<u64> {
        let mut b = [0u8; 8];
        self.inner.read_exact(&mut b).map_err(io_err(self.path))?;
        Ok(u64::from_le_bytes(b))
    }
    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_bits(self.u64()?))
    }
}

/// Load a checkpoint saved by [`save_checkpoint`].
pub fn load_checkpoint(path: &Path) -> Result<TrainedModel> {
    let file = File::open(path).map_err(io_err(path))?;
    let mut r = R {
        inner: BufReader::new(file),
        path,
    };
    let mut magic = [0u8; 4];
    r.inner.read_exact(&mut magic).map_err(io_err(path))?;
    if magic != CHECKPOINT_MAGIC {
        return Err(bad(path, format!("bad magic {magic:?}")));
    }
    if r.u8()? != VERSION {
        return Err(bad(path, "unsupported version"));
    }

    let embedding_dim = r.u64()? as usize;
    let attention_dim = r.u64()? as usize;
    let k_levels = r.u64()? as usize;
    let walks_per_node = r.u64()? as usize;
    let walk_length = r.u64()? as usize;
    let window = r.u64()? as usize;
    let negatives = r.u64()? as usize;
    let max_epochs = r.u64()? as usize;
    let patience = r.u64()? as usize;
    let neighbor_budget = r.u64()? as usize;
    let batch_triples = r.u64()? as usize;
    let seed = r.u64()?;
    let learning_rate = r.f64()?;
    let activation = match r.u8()? {
        0 => Activation::Elu,
        1 => Activation::Tanh,
        other => return Err(bad(path, format!("unknown activation tag {other}"))),
    };
    let noise = match r.u8()? {
        0 => NoiseKind::Uniform,
        1 => NoiseKind::LogUniformByDegree,
        other => return Err(bad(path, format!("unknown noise tag {other}"))),
    };
    let per_relation_context = r.u8()? != 0;
    let attention = match r.u8()? {
        0 => AttentionMode::Full,
        1 => AttentionMode::Disabled,
        other => return Err(bad(path, format!("unknown attention tag {other}"))),
    };
    let config = TrainConfig {
        embedding_dim,
        attention_dim,
        k_levels,
        walks_per_node,
        walk_length,
        window,
        negatives,
        max_epochs,
        patience,
        learning_rate,
        neighbor_budget,
        activation,
        seed,
        batch_triples,
        noise,
        per_relation_context,
        attention,
    };

    let node_count = r.u64()? as usize;
    let relation_count = r.u64()? as usize;
    let dim_count = r.u32()? as usize;
    let mut input_dims = Vec::with_capacity(dim_count);
    for _ in 0..dim_count {
        input_dims.push(r.u64()? as usize);
    }
    let meta = ModelMeta {
        node_count,
        relation_count,
        input_dims: input_dims.clone(),
        embedding_dim,
        attention_dim,
        k_levels,
        per_relation_context,
        activation,
    };

    let tensor_count = r.u32()? as usize;
    let mut tensors = Vec::with_capacity(tensor_count);
    for _ in 0..tensor_count {
        let name_len = r.u16()? as usize;
        let mut name_buf = vec![0u8; name_len];
        r.inner.read_exact(&mut name_buf).map_err(io_err(path))?;
        let name = String::from_utf8(name_buf).map_err(|_| bad(path, "bad tensor name"))?;
        let kind = r.u8()?;
        let data = match kind {
            0 => {
                let rows = r.u32()? as usize;
                let cols = r.u32()? as usize;
                let mut m = Array2::zeros((rows, cols));
                for i in 0..rows {
                    for j in 0..cols {
                        m[(i, j)] = r.f64()?;
                    }
                }
                TensorData::Mat(m)
            }
            1 => {
                let len = r.u32()? as usize;
                let mut v = Array1::zeros(len);
                for i in 0..len {
                    v[i] = r.f64()?;
                }
                TensorData::Vec1(v)
            }
            other => return Err(bad(path, format!("unknown tensor kind {other}"))),
        };
        tensors.push(Tensor { name, data });
    }

    // Rebuild role indices in the construction order used by init: input
    // projections, then per level per relation (self, neigh, bias, attn,
    // rel), then the context table.
    let type_count = input_dims.len();
    let expected = type_count + k_levels * relation_count * 5 + 1;
    if tensors.len() != expected {
        return Err(bad(
            path,
            format!("expected {expected} tensors, found {}", tensors.len()),
        ));
    }
    let mut next = 0..tensors.len();
    let mut take = || next.next().expect("length checked");
    let input_proj = (0..type_count).map(|_| take()).collect();
    let mut self_w = Vec::new();
    let mut neigh_w = Vec::new();
    let mut bias = Vec::new();
    let mut attn_w = Vec::new();
    let mut rel_w = Vec::new();
    for _ in 0..k_levels {
        let mut s = Vec::new();
        let mut n = Vec::new();
        let mut b = Vec::new();
        let mut a = Vec::new();
        let mut rl = Vec::new();
        for _ in 0..relation_count {
            s.push(take());
            n.push(take());
            b.push(take());
            a.push(take());
            rl.push(take());
        }
        self_w.push(s);
        neigh_w.push(n);
        bias.push(b);
        attn_w.push(a);
        rel_w.push(rl);
    }
    let context = take();

    Ok(TrainedModel {
        params: ModelParameters {
            tensors,
            meta,
            input_proj,
            self_w,
            neigh_w,
            bias,
            attn_w,
            rel_w,
            context,
        },
        config,
    })
}
