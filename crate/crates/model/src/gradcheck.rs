use graph_core::{MultiplexGraph, NodeId, RelationId, SampleTree};
use ndarray::Array1;

use crate::config::AttentionMode;
use crate::forward::{forward_on_tape, forward_reference};
use crate::loss::nce_loss;
use crate::params::{GradStore, ModelParameters};
use crate::tape::Tape;
use crate::Result;

/// One frozen training example for gradient verification: the tree the
/// center was sampled with, plus fixed context and negative node ids.
#[derive(Debug, Clone)]
pub struct CheckTriple {
    pub tree_index: usize,
    pub relation: RelationId,
    pub context: NodeId,
    pub negatives: Vec<NodeId>,
}

/// A frozen batch: everything stochastic (trees, negatives) is pinned so the
/// total loss is a pure function of the parameters.
#[derive(Debug, Clone)]
pub struct CheckBatch {
    pub trees: Vec<SampleTree>,
    pub triples: Vec<CheckTriple>,
}

fn total_loss(
    params: &ModelParameters,
    g: &MultiplexGraph,
    batch: &CheckBatch,
    mode: AttentionMode,
) -> Result<f64> {
    let mut loss = 0.0;
    for (ti, tree) in batch.trees.iter().enumerate() {
        let (emb, _) = forward_reference(params, g, tree, mode)?;
        for triple in batch.triples.iter().filter(|t| t.tree_index == ti) {
            let z = emb.row(triple.relation as usize);
            let c = params.context_embedding(triple.context, triple.relation);
            let negs: Vec<_> = triple
                .negatives
                .iter()
                .map(|&u| params.context_embedding(u, triple.relation))
                .collect();
            loss += nce_loss(z, c, &negs).0;
        }
    }
    Ok(loss)
}

fn analytic_grads(
    params: &ModelParameters,
    g: &MultiplexGraph,
    batch: &CheckBatch,
    mode: AttentionMode,
) -> Result<GradStore> {
    let mut grads = GradStore::zeros_like(params);
    let d = params.meta.embedding_dim;
    let context_tid = params.context;
    for (ti, tree) in batch.trees.iter().enumerate() {
        let mut tape = Tape::new(params);
        let fwd = forward_on_tape(&mut tape, g, tree, mode)?;
        let mut seeds: Vec<Array1<f64>> = vec![Array1::zeros(d); params.meta.relation_count];
        for triple in batch.triples.iter().filter(|t| t.tree_index == ti) {
            let z = fwd.embeddings.row(triple.relation as usize);
            let c = params.context_embedding(triple.context, triple.relation);
            let negs: Vec<_> = triple
                .negatives
                .iter()
                .map(|&u| params.context_embedding(u, triple.relation))
                .collect();
            let (_, g_nce) = nce_loss(z, c, &negs);
            seeds[triple.relation as usize] += &g_nce.z;
            grads.add_row(
                context_tid,
                params.context_row(triple.context, triple.relation),
                d,
                g_nce.context.as_slice().unwrap(),
                1.0,
            );
            for (neg, dneg) in triple.negatives.iter().zip(&g_nce.negatives) {
                grads.add_row(
                    context_tid,
                    params.context_row(*neg, triple.relation),
                    d,
                    dneg.as_slice().unwrap(),
                    1.0,
                );
            }
        }
        let seed_pairs: Vec<_> = fwd
            .z_vars
            .iter()
            .zip(seeds)
            .map(|(var, s)| (*var, s))
            .collect();
        tape.backward(&seed_pairs, &mut grads);
    }
    Ok(grads)
}

/// Compare the analytic gradient of the batch loss against central finite
/// differences for every entry of every parameter tensor. Returns the worst
/// relative error, `|a - n| / max(|a| + |n|, 1e-6)`.
pub fn gradient_check(
    params: &mut ModelParameters,
    g: &MultiplexGraph,
    batch: &CheckBatch,
    mode: AttentionMode,
    eps: f64,
) -> Result<f64> {
    let analytic = analytic_grads(params, g, batch, mode)?;
    let mut worst = 0.0f64;
    for tid in 0..params.tensors.len() {
        for i in 0..params.tensors[tid].data.len() {
            let original = params.tensors[tid].data.flat()[i];
            params.tensors[tid].data.flat_mut()[i] = original + eps;
            let plus = total_loss(params, g, batch, mode)?;
            params.tensors[tid].data.flat_mut()[i] = original - eps;
            let minus = total_loss(params, g, batch, mode)?;
            params.tensors[tid].data.flat_mut()[i] = original;
            let numeric = (plus - minus) / (2.0 * eps);
            let a = analytic.grads[tid][i];
            let rel = (a - numeric).abs() / (a.abs() + numeric.abs()).max(1e-6);
            if rel > worst {
                worst = rel;
            }
        }
    }
    Ok(worst)
}
