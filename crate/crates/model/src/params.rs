use graph_core::{MultiplexGraph, NodeId, RelationId};
use ndarray::{Array1, Array2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{Activation, TrainConfig};
use crate::{ModelError, Result};

pub type TensorId = usize;

#[derive(Debug, Clone, PartialEq)]
pub enum TensorData {
    Mat(Array2<f64>),
    Vec1(Array1<f64>),
}

impl TensorData {
    pub fn len(&self) -> usize {
        match self {
            TensorData::Mat(m) => m.len(),
            TensorData::Vec1(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn flat(&self) -> &[f64] {
        match self {
            TensorData::Mat(m) => m.as_slice().expect("standard layout"),
            TensorData::Vec1(v) => v.as_slice().expect("standard layout"),
        }
    }

    pub fn flat_mut(&mut self) -> &mut [f64] {
        match self {
            TensorData::Mat(m) => m.as_slice_mut().expect("standard layout"),
            TensorData::Vec1(v) => v.as_slice_mut().expect("standard layout"),
        }
    }

    pub fn mat(&self) -> &Array2<f64> {
        match self {
            TensorData::Mat(m) => m,
            TensorData::Vec1(_) => panic!("expected matrix tensor"),
        }
    }

    pub fn vec(&self) -> &Array1<f64> {
        match self {
            TensorData::Vec1(v) => v,
            TensorData::Mat(_) => panic!("expected vector tensor"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tensor {
    pub name: String,
    pub data: TensorData,
}

/// Structural description the parameters were built for; checked against the
/// graph before a loaded checkpoint drives any forward pass.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelMeta {
    pub node_count: usize,
    pub relation_count: usize,
    pub input_dims: Vec<usize>,
    pub embedding_dim: usize,
    pub attention_dim: usize,
    pub k_levels: usize,
    pub per_relation_context: bool,
    pub activation: Activation,
}

/// All trainable tensors, flat-indexed so the optimizer and the gradient
/// checker can walk every parameter uniformly.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParameters {
    pub tensors: Vec<Tensor>,
    pub meta: ModelMeta,
    /// Per node type: input projection, `d x input_dim`.
    pub input_proj: Vec<TensorId>,
    /// `[level][relation]`: self transform, `d x d`.
    pub self_w: Vec<Vec<TensorId>>,
    /// `[level][relation]`: neighbor transform, `d x d`.
    pub neigh_w: Vec<Vec<TensorId>>,
    /// `[level][relation]`: bias, `d`.
    pub bias: Vec<Vec<TensorId>>,
    /// `[level][relation]`: attention transform, `d x d_a`.
    pub attn_w: Vec<Vec<TensorId>>,
    /// `[level][relation]`: relation attention, `d_a x |R|`.
    pub rel_w: Vec<Vec<TensorId>>,
    /// Context embeddings: `|V| x d`, or `(|V| |R|) x d` per-relation.
    pub context: TensorId,
}

fn glorot<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Array2<f64> {
    let limit = (6.0 / (rows + cols) as f64).sqrt();
    Array2::from_shape_fn((rows, cols), |_| rng.random_range(-limit..limit))
}

fn normal_pair<R: Rng + ?Sized>(rng: &mut R) -> (f64, f64) {
    // Box-Muller; avoids ln(0)
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random();
    let r = (-2.0 * u1.ln()).sqrt();
    let theta = 2.0 * std::f64::consts::PI * u2;
    (r * theta.cos(), r * theta.sin())
}

impl ModelParameters {
    /// Initialize for a graph: Glorot-uniform transforms, zero biases,
    /// N(0, 1/d) context embeddings. Deterministic per config seed.
    pub fn init(g: &MultiplexGraph, cfg: &TrainConfig) -> Result<Self> {
        cfg.validate()?;
        let d = cfg.embedding_dim;
        let d_a = cfg.attention_dim;
        let r_count = g.relation_count();
        let input_dims: Vec<usize> = (0..g.node_type_count() as u16)
            .map(|t| g.feature_dim(t))
            .collect();
        if input_dims.iter().any(|&dim| dim == 0) {
            return Err(ModelError::BadConfig(
                "every node type needs at least one attribute column".into(),
            ));
        }
        let meta = ModelMeta {
            node_count: g.node_count(),
            relation_count: r_count,
            input_dims: input_dims.clone(),
            embedding_dim: d,
            attention_dim: d_a,
            k_levels: cfg.k_levels,
            per_relation_context: cfg.per_relation_context,
            activation: cfg.activation,
        };

        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut tensors = Vec::new();
        let push = |name: String, data: TensorData, tensors: &mut Vec<Tensor>| -> TensorId {
            tensors.push(Tensor { name, data });
            tensors.len() - 1
        };

        let input_proj = input_dims
            .iter()
            .enumerate()
            .map(|(t, &dim)| {
                push(
                    format!("input_proj[type{t}]"),
                    TensorData::Mat(glorot(d, dim, &mut rng)),
                    &mut tensors,
                )
            })
            .collect();

        let mut self_w = Vec::new();
        let mut neigh_w = Vec::new();
        let mut bias = Vec::new();
        let mut attn_w = Vec::new();
        let mut rel_w = Vec::new();
        for k in 1..=cfg.k_levels {
            let mut s_row = Vec::new();
            let mut n_row = Vec::new();
            let mut b_row = Vec::new();
            let mut a_row = Vec::new();
            let mut r_row = Vec::new();
            for r in 0..r_count {
                s_row.push(push(
                    format!("self_w[k{k}][r{r}]"),
                    TensorData::Mat(glorot(d, d, &mut rng)),
                    &mut tensors,
                ));
                n_row.push(push(
                    format!("neigh_w[k{k}][r{r}]"),
                    TensorData::Mat(glorot(d, d, &mut rng)),
                    &mut tensors,
                ));
                b_row.push(push(
                    format!("bias[k{k}][r{r}]"),
                    TensorData::Vec1(Array1::zeros(d)),
                    &mut tensors,
                ));
                a_row.push(push(
                    format!("attn_w[k{k}][r{r}]"),
                    TensorData::Mat(glorot(d, d_a, &mut rng)),
                    &mut tensors,
                ));
                r_row.push(push(
                    format!("rel_w[k{k}][r{r}]"),
                    TensorData::Mat(glorot(d_a, r_count, &mut rng)),
                    &mut tensors,
                ));
            }
            self_w.push(s_row);
            neigh_w.push(n_row);
            bias.push(b_row);
            attn_w.push(a_row);
            rel_w.push(r_row);
        }

        let context_rows = if cfg.per_relation_context {
            g.node_count() * r_count
        } else {
            g.node_count()
        };
        let std = (1.0 / d as f64).sqrt();
        let mut context = Array2::zeros((context_rows, d));
        {
            let slice = context.as_slice_mut().unwrap();
            let mut i = 0;
            while i < slice.len() {
                let (a, b) = normal_pair(&mut rng);
                slice[i] = a * std;
                if i + 1 < slice.len() {
                    slice[i + 1] = b * std;
                }
                i += 2;
            }
        }
        let context = push("context".into(), TensorData::Mat(context), &mut tensors);

        Ok(ModelParameters {
            tensors,
            meta,
            input_proj,
            self_w,
            neigh_w,
            bias,
            attn_w,
            rel_w,
            context,
        })
    }

    pub fn parameter_count(&self) -> usize {
        self.tensors.iter().map(|t| t.data.len()).sum()
    }

    /// Row of the context tensor holding node `v`'s context embedding for
    /// relation `r`.
    pub fn context_row(&self, v: NodeId, r: RelationId) -> usize {
        if self.meta.per_relation_context {
            v as usize * self.meta.relation_count + r as usize
        } else {
            v as usize
        }
    }

    pub fn context_embedding(&self, v: NodeId, r: RelationId) -> ndarray::ArrayView1<'_, f64> {
        self.tensors[self.context]
            .data
            .mat()
            .row(self.context_row(v, r))
    }

    /// Reject parameter sets built for a structurally different graph.
    pub fn validate_against(&self, g: &MultiplexGraph) -> Result<()> {
        if self.meta.node_count != g.node_count() {
            return Err(ModelError::SchemaMismatch(format!(
                "node count {} vs {}",
                self.meta.node_count,
                g.node_count()
            )));
        }
        if self.meta.relation_count != g.relation_count() {
            return Err(ModelError::SchemaMismatch(format!(
                "relation count {} vs {}",
                self.meta.relation_count,
                g.relation_count()
            )));
        }
        let dims: Vec<usize> = (0..g.node_type_count() as u16)
            .map(|t| g.feature_dim(t))
            .collect();
        if self.meta.input_dims != dims {
            return Err(ModelError::SchemaMismatch(format!(
                "attribute dimensions {:?} vs {:?}",
                self.meta.input_dims, dims
            )));
        }
        Ok(())
    }
}

/// Dense gradient buffers parallel to a parameter set's tensors.
#[derive(Debug, Clone)]
pub struct GradStore {
    pub grads: Vec<Vec<f64>>,
}

impl GradStore {
    pub fn zeros_like(params: &ModelParameters) -> Self {
        GradStore {
            grads: params
                .tensors
                .iter()
                .map(|t| vec![0.0; t.data.len()])
                .collect(),
        }
    }

    pub fn reset(&mut self) {
        for g in &mut self.grads {
            g.fill(0.0);
        }
    }

    /// grad[W] += outer(row_part, col_part) for a matrix tensor.
    pub fn add_outer(&mut self, id: TensorId, row_part: &[f64], col_part: &[f64]) {
        let cols = col_part.len();
        let buf = &mut self.grads[id];
        for (i, &ri) in row_part.iter().enumerate() {
            if ri == 0.0 {
                continue;
            }
            let base = i * cols;
            for (j, &cj) in col_part.iter().enumerate() {
                buf[base + j] += ri * cj;
            }
        }
    }

    pub fn add_vec(&mut self, id: TensorId, g: &[f64]) {
        let buf = &mut self.grads[id];
        for (slot, &x) in buf.iter_mut().zip(g) {
            *slot += x;
        }
    }

    /// Accumulate into one row of a matrix tensor (context embeddings).
    pub fn add_row(&mut self, id: TensorId, row: usize, cols: usize, g: &[f64], scale: f64) {
        let buf = &mut self.grads[id][row * cols..(row + 1) * cols];
        for (slot, &x) in buf.iter_mut().zip(g) {
            *slot += scale * x;
        }
    }
}
