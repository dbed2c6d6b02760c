use std::collections::HashMap;

use graph_core::{MultiplexGraph, NodeId, SampleTree};
use ndarray::{Array1, Array2, ArrayView1};

use crate::config::{Activation, AttentionMode};
use crate::params::ModelParameters;
use crate::tape::{Tape, Var};
use crate::{ModelError, Result};

/// Values produced for the root node of one tree forward.
#[derive(Debug, Clone)]
pub struct ForwardOutput {
    /// |R| x d final multi-embedding of the root node.
    pub embeddings: Array2<f64>,
    /// Per level k = 1..K: the root's |R| x |R| attention matrix (row =
    /// output relation). Identity rows are reported when attention is
    /// disabled.
    pub attention: Vec<Array2<f64>>,
    /// Per level k = 1..K: the root's |R| x d pre-attention rows (the
    /// stacked relation-convolution outputs the attention mixes).
    pub pre_attention: Vec<Array2<f64>>,
}

/// A forward pass recorded on a tape: the root values plus the tape vars of
/// the final per-relation rows for backpropagation.
#[derive(Debug)]
pub struct ForwardResult {
    pub output: ForwardOutput,
    /// Tape vars of the root's final per-relation rows.
    pub z_vars: Vec<Var>,
}

impl std::ops::Deref for ForwardResult {
    type Target = ForwardOutput;

    fn deref(&self) -> &ForwardOutput {
        &self.output
    }
}

/// Mean neighbor message: transform the averaged level-(k-1) neighbor
/// representations; zero vector when the sample is empty.
pub fn neighbor_message(
    neigh_w: &Array2<f64>,
    neighbor_reps: &[ArrayView1<'_, f64>],
) -> Array1<f64> {
    if neighbor_reps.is_empty() {
        return Array1::zeros(neigh_w.nrows());
    }
    let mut mean = neighbor_reps[0].to_owned();
    for rep in &neighbor_reps[1..] {
        mean += rep;
    }
    mean /= neighbor_reps.len() as f64;
    neigh_w.dot(&mean)
}

/// One relation convolution: activation(W_s h + message + b).
pub fn relation_conv(
    self_w: &Array2<f64>,
    self_rep: ArrayView1<'_, f64>,
    message: &Array1<f64>,
    bias: &Array1<f64>,
    activation: Activation,
) -> Array1<f64> {
    let mut pre = self_w.dot(&self_rep);
    pre += message;
    pre += bias;
    pre.mapv(|t| activation.apply(t))
}

/// Relational self-attention over stacked per-relation rows. For each output
/// relation r: logits = tanh(stacked_r W_attn[r]) W_rel[r], softmaxed into a
/// row of mixing weights; the attended row is that convex combination of all
/// stacked rows.
pub fn relational_attention(
    attn_w: &[&Array2<f64>],
    rel_w: &[&Array2<f64>],
    stacked: &Array2<f64>,
) -> (Array2<f64>, Array2<f64>) {
    let r_count = stacked.nrows();
    let d = stacked.ncols();
    let mut attention = Array2::zeros((r_count, r_count));
    let mut attended = Array2::zeros((r_count, d));
    for r in 0..r_count {
        let hidden = attn_w[r].t().dot(&stacked.row(r)).mapv(f64::tanh);
        let logits = rel_w[r].t().dot(&hidden);
        let max = logits.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
        let exps = logits.mapv(|t| (t - max).exp());
        let weights = &exps / exps.sum();
        for (j, &w) in weights.iter().enumerate() {
            attention[(r, j)] = w;
            for c in 0..d {
                attended[(r, c)] += w * stacked[(j, c)];
            }
        }
    }
    (attention, attended)
}

fn check_finite(values: &Array1<f64>, level: usize, relation: usize) -> Result<()> {
    if values.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(ModelError::NonFinite {
            level,
            relation: relation as u16,
        })
    }
}

struct TreeForward<'a, 'p> {
    tape: &'a mut Tape<'p>,
    graph: &'a MultiplexGraph,
    mode: AttentionMode,
    /// Level-0 projections are position-independent; share them per node.
    h0_cache: HashMap<NodeId, Var>,
}

impl TreeForward<'_, '_> {
    fn h0(&mut self, v: NodeId) -> Var {
        if let Some(&var) = self.h0_cache.get(&v) {
            return var;
        }
        let params = self.tape.params();
        let t = self.graph.node_type(v);
        let x = self.tape.constant(self.graph.node_features(v).to_owned());
        let var = self.tape.matvec(params.input_proj[t as usize], x);
        self.h0_cache.insert(v, var);
        var
    }

    /// Representations of `tree.node` for levels 0..=tree.levels; each level
    /// holds one var per relation. Returns the ladder plus the attention and
    /// pre-attention matrices recorded per level.
    #[allow(clippy::type_complexity)]
    fn ladder(
        &mut self,
        tree: &SampleTree,
    ) -> Result<(Vec<Vec<Var>>, Vec<Array2<f64>>, Vec<Array2<f64>>)> {
        let params = self.tape.params();
        let r_count = params.meta.relation_count;
        let d = params.meta.embedding_dim;
        let activation = params.meta.activation;
        let h0 = self.h0(tree.node);
        let mut levels: Vec<Vec<Var>> = vec![vec![h0; r_count]];
        if tree.levels == 0 {
            return Ok((levels, Vec::new(), Vec::new()));
        }

        let mut child_ladders: Vec<Vec<Vec<Vec<Var>>>> = Vec::with_capacity(r_count);
        for r in 0..r_count {
            let mut per_child = Vec::with_capacity(tree.children[r].len());
            for child in &tree.children[r] {
                per_child.push(self.ladder(child)?.0);
            }
            child_ladders.push(per_child);
        }

        let mut attention_per_level = Vec::with_capacity(tree.levels);
        let mut pre_attention_per_level = Vec::with_capacity(tree.levels);
        for m in 1..=tree.levels {
            let params = self.tape.params();
            let mut tilde = Vec::with_capacity(r_count);
            for r in 0..r_count {
                let self_prev = levels[m - 1][r];
                let self_term = self.tape.matvec(params.self_w[m - 1][r], self_prev);
                let message = if child_ladders[r].is_empty() {
                    self.tape.zeros(params.meta.embedding_dim)
                } else {
                    let reps: Vec<Var> = child_ladders[r]
                        .iter()
                        .map(|ladder| ladder[m - 1][r])
                        .collect();
                    let mean = self.tape.mean(reps);
                    self.tape.matvec(params.neigh_w[m - 1][r], mean)
                };
                let sum = self.tape.add(self_term, message);
                let pre = self.tape.add_bias(sum, params.bias[m - 1][r]);
                let act = self.tape.activation(pre, activation);
                check_finite(self.tape.value(act), m, r)?;
                tilde.push(act);
            }
            let mut stacked = Array2::zeros((r_count, d));
            for (r, var) in tilde.iter().enumerate() {
                stacked.row_mut(r).assign(self.tape.value(*var));
            }
            pre_attention_per_level.push(stacked);

            let (next, attention) = match self.mode {
                AttentionMode::Disabled => {
                    let mut attn = Array2::zeros((r_count, r_count));
                    for r in 0..r_count {
                        attn[(r, r)] = 1.0;
                    }
                    (tilde.clone(), attn)
                }
                AttentionMode::Full => {
                    let mut rows = Vec::with_capacity(r_count);
                    let mut attn = Array2::zeros((r_count, r_count));
                    for r in 0..r_count {
                        let params = self.tape.params();
                        let hidden = self.tape.vecmat(params.attn_w[m - 1][r], tilde[r]);
                        let squashed = self.tape.tanh(hidden);
                        let logits = self.tape.vecmat(params.rel_w[m - 1][r], squashed);
                        let weights = self.tape.softmax(logits);
                        for (j, &w) in self.tape.value(weights).iter().enumerate() {
                            attn[(r, j)] = w;
                        }
                        let mixed = self.tape.mix(weights, tilde.clone());
                        check_finite(self.tape.value(mixed), m, r)?;
                        rows.push(mixed);
                    }
                    (rows, attn)
                }
            };
            attention_per_level.push(attention);
            levels.push(next);
        }
        Ok((levels, attention_per_level, pre_attention_per_level))
    }
}

/// Record the forward pass of one sample tree on `tape`.
pub fn forward_on_tape(
    tape: &mut Tape<'_>,
    g: &MultiplexGraph,
    tree: &SampleTree,
    mode: AttentionMode,
) -> Result<ForwardResult> {
    let r_count = tape.params().meta.relation_count;
    let d = tape.params().meta.embedding_dim;
    let mut tf = TreeForward {
        tape,
        graph: g,
        mode,
        h0_cache: HashMap::new(),
    };
    let (levels, attention, pre_attention) = tf.ladder(tree)?;
    let z_vars = levels.last().unwrap().clone();
    let mut embeddings = Array2::zeros((r_count, d));
    for (r, var) in z_vars.iter().enumerate() {
        embeddings.row_mut(r).assign(tf.tape.value(*var));
    }
    Ok(ForwardResult {
        output: ForwardOutput {
            embeddings,
            attention,
            pre_attention,
        },
        z_vars,
    })
}

/// Tape-free forward pass (inference). Composes the public single-step
/// operations directly; agrees with the tape route to rounding error.
pub fn forward_reference(
    params: &ModelParameters,
    g: &MultiplexGraph,
    tree: &SampleTree,
    mode: AttentionMode,
) -> Result<(Array2<f64>, Vec<Array2<f64>>)> {
    let r_count = params.meta.relation_count;
    let mut h0_cache: HashMap<NodeId, Array1<f64>> = HashMap::new();
    let (levels, attention) = reference_ladder(params, g, tree, mode, &mut h0_cache)?;
    let d = params.meta.embedding_dim;
    let mut embeddings = Array2::zeros((r_count, d));
    for r in 0..r_count {
        embeddings.row_mut(r).assign(&levels[tree.levels][r]);
    }
    Ok((embeddings, attention))
}

fn reference_ladder(
    params: &ModelParameters,
    g: &MultiplexGraph,
    tree: &SampleTree,
    mode: AttentionMode,
    h0_cache: &mut HashMap<NodeId, Array1<f64>>,
) -> Result<(Vec<Vec<Array1<f64>>>, Vec<Array2<f64>>)> {
    let r_count = params.meta.relation_count;
    let d = params.meta.embedding_dim;
    let h0 = h0_cache
        .entry(tree.node)
        .or_insert_with(|| {
            let t = g.node_type(tree.node) as usize;
            params.tensors[params.input_proj[t]]
                .data
                .mat()
                .dot(&g.node_features(tree.node))
        })
        .clone();
    let mut levels = vec![vec![h0; r_count]];
    if tree.levels == 0 {
        return Ok((levels, Vec::new()));
    }

    let mut child_ladders: Vec<Vec<Vec<Vec<Array1<f64>>>>> = Vec::with_capacity(r_count);
    for r in 0..r_count {
        let mut per_child = Vec::new();
        for child in &tree.children[r] {
            per_child.push(reference_ladder(params, g, child, mode, h0_cache)?.0);
        }
        child_ladders.push(per_child);
    }

    let mut attention_per_level = Vec::with_capacity(tree.levels);
    for m in 1..=tree.levels {
        let mut stacked = Array2::zeros((r_count, d));
        for r in 0..r_count {
            let reps: Vec<ArrayView1<'_, f64>> = child_ladders[r]
                .iter()
                .map(|ladder| ladder[m - 1][r].view())
                .collect();
            let message = neighbor_message(params.tensors[params.neigh_w[m - 1][r]].data.mat(), &reps);
            let row = relation_conv(
                params.tensors[params.self_w[m - 1][r]].data.mat(),
                levels[m - 1][r].view(),
                &message,
                params.tensors[params.bias[m - 1][r]].data.vec(),
                params.meta.activation,
            );
            check_finite(&row, m, r)?;
            stacked.row_mut(r).assign(&row);
        }
        let (attn, next_rows) = match mode {
            AttentionMode::Disabled => {
                let mut attn = Array2::zeros((r_count, r_count));
                for r in 0..r_count {
                    attn[(r, r)] = 1.0;
                }
                (attn, stacked)
            }
            AttentionMode::Full => {
                let attn_mats: Vec<&Array2<f64>> = (0..r_count)
                    .map(|r| params.tensors[params.attn_w[m - 1][r]].data.mat())
                    .collect();
                let rel_mats: Vec<&Array2<f64>> = (0..r_count)
                    .map(|r| params.tensors[params.rel_w[m - 1][r]].data.mat())
                    .collect();
                relational_attention(&attn_mats, &rel_mats, &stacked)
            }
        };
        attention_per_level.push(attn);
        levels.push((0..r_count).map(|r| next_rows.row(r).to_owned()).collect());
    }
    Ok((levels, attention_per_level))
}

/// One-off forward pass allocating its own tape.
pub fn forward(
    params: &ModelParameters,
    g: &MultiplexGraph,
    tree: &SampleTree,
    mode: AttentionMode,
) -> Result<(Array2<f64>, Vec<Array2<f64>>)> {
    let mut tape = Tape::new(params);
    let result = forward_on_tape(&mut tape, g, tree, mode)?;
    Ok((result.embeddings, result.attention))
}
