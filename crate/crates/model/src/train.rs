use std::collections::HashMap;
use std::io::Write;
use std::path::Path;

use graph_core::{build_k_level_sample, MultiplexGraph, NodeId, RelationId};
use ndarray::{Array1, Array2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use walker::{build_noise_distribution, extract_contexts, ContextTriple, NoiseDistribution, WalkCorpus};

use crate::adam::Adam;
use crate::config::TrainConfig;
use crate::forward::{forward_on_tape, forward_reference};
use crate::loss::{nce_loss, sigmoid};
use crate::params::{GradStore, ModelParameters};
use crate::tape::Tape;
use crate::{ModelError, Result};

/// A labeled edge used for per-epoch validation scoring.
#[derive(Debug, Clone, Copy)]
pub struct ValidationEdge {
    pub src: NodeId,
    pub dst: NodeId,
    pub relation: RelationId,
    pub label: bool,
}

#[derive(Debug, Clone, Default)]
pub struct ValidationSet {
    pub edges: Vec<ValidationEdge>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpochRecord {
    pub epoch: usize,
    pub mean_loss: f64,
    pub val_auc: f64,
}

/// Parameters plus the configuration that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainedModel {
    pub params: ModelParameters,
    pub config: TrainConfig,
}

#[derive(Debug)]
pub struct TrainOutcome {
    pub model: TrainedModel,
    pub history: Vec<EpochRecord>,
    pub stopped_early: bool,
    pub best_epoch: usize,
}

fn stream_seed(base: u64, tag: u64, salt: u64) -> u64 {
    let mut x = base ^ tag.rotate_left(17) ^ salt.rotate_left(41);
    x ^= x >> 30;
    x = x.wrapping_mul(0xbf58476d1ce4e5b9);
    x ^= x >> 27;
    x = x.wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}

/// Rank-based AUC with ties counted half; both classes must be present.
pub(crate) fn mann_whitney_auc(scores: &[f64], labels: &[bool]) -> f64 {
    let n = scores.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| scores[a].partial_cmp(&scores[b]).unwrap());
    let mut ranks = vec![0.0f64; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        let avg = (i + j + 2) as f64 / 2.0;
        for k in i..=j {
            ranks[order[k]] = avg;
        }
        i = j + 1;
    }
    let pos = labels.iter().filter(|&&l| l).count() as f64;
    let neg = n as f64 - pos;
    let rank_sum: f64 = (0..n).filter(|&k| labels[k]).map(|k| ranks[k]).sum();
    (rank_sum - pos * (pos + 1.0) / 2.0) / (pos * neg)
}

fn validation_auc(
    params: &ModelParameters,
    g: &MultiplexGraph,
    cfg: &TrainConfig,
    validation: &ValidationSet,
    epoch: usize,
) -> Result<f64> {
    if validation.edges.is_empty() {
        return Ok(0.5);
    }
    let budgets = cfg.budgets();
    let mut cache: HashMap<NodeId, Array2<f64>> = HashMap::new();
    let embed = |v: NodeId, cache: &mut HashMap<NodeId, Array2<f64>>| -> Result<()> {
        if !cache.contains_key(&v) {
            let mut rng =
                ChaCha8Rng::seed_from_u64(stream_seed(cfg.seed, 0xEA11, (epoch as u64) << 32 | v as u64));
            let tree = build_k_level_sample(g, v, cfg.k_levels, &budgets, &mut rng)?;
            let (emb, _) = forward_reference(params, g, &tree, cfg.attention)?;
            cache.insert(v, emb);
        }
        Ok(())
    };
    let mut scores = Vec::with_capacity(validation.edges.len());
    let mut labels = Vec::with_capacity(validation.edges.len());
    for e in &validation.edges {
        embed(e.src, &mut cache)?;
        embed(e.dst, &mut cache)?;
        let zu = &cache[&e.src];
        let zv = &cache[&e.dst];
        let dot = zu.row(e.relation as usize).dot(&zv.row(e.relation as usize));
        scores.push(sigmoid(dot));
        labels.push(e.label);
    }
    Ok(mann_whitney_auc(&scores, &labels))
}

/// Minibatch training over context triples with per-epoch validation and
/// early stopping. Returns the best-validation parameters. Deterministic in
/// single-threaded mode for a fixed seed.
pub fn train(
    g: &MultiplexGraph,
    corpus: &WalkCorpus,
    cfg: &TrainConfig,
    validation: &ValidationSet,
) -> Result<TrainOutcome> {
    cfg.validate()?;
    if corpus.is_empty() {
        return Err(ModelError::EmptyCorpus);
    }
    let mut triples = extract_contexts(corpus, cfg.window)?;
    if triples.is_empty() {
        return Err(ModelError::EmptyCorpus);
    }
    triples.sort_by_key(|t| t.center);
    let mut groups: Vec<(NodeId, Vec<ContextTriple>)> = Vec::new();
    for t in triples {
        match groups.last_mut() {
            Some((center, list)) if *center == t.center => list.push(t),
            _ => groups.push((t.center, vec![t])),
        }
    }

    let mut noise: Vec<Option<NoiseDistribution>> = Vec::new();
    for t in 0..g.node_type_count() as u16 {
        noise.push(if g.nodes_of_type(t).is_empty() {
            None
        } else {
            Some(build_noise_distribution(g, t, cfg.noise)?)
        });
    }

    let mut params = ModelParameters::init(g, cfg)?;
    let mut adam = Adam::new(&params);
    let mut grads = GradStore::zeros_like(&params);
    let budgets = cfg.budgets();
    let d = cfg.embedding_dim;
    let context_tid = params.context;

    let mut history = Vec::new();
    let mut best_auc = f64::NEG_INFINITY;
    let mut best_epoch = 0;
    let mut best_params = params.clone();
    let mut bad_epochs = 0;
    let mut stopped_early = false;

    for epoch in 1..=cfg.max_epochs {
        let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(cfg.seed, 0x7247, epoch as u64));
        let mut order: Vec<usize> = (0..groups.len()).collect();
        for i in (1..order.len()).rev() {
            order.swap(i, rng.random_range(0..=i));
        }

        let mut loss_sum = 0.0;
        let mut triple_count = 0usize;
        let mut batch_index = 0usize;
        for &gi in &order {
            let (center, group) = &groups[gi];
            for chunk in group.chunks(cfg.batch_triples) {
                let tree = build_k_level_sample(g, *center, cfg.k_levels, &budgets, &mut rng)?;
                let scale = 1.0 / chunk.len() as f64;
                let mut chunk_loss = 0.0;
                {
                    let mut tape = Tape::new(&params);
                    let fwd = forward_on_tape(&mut tape, g, &tree, cfg.attention)?;
                    let mut seeds: Vec<Array1<f64>> =
                        vec![Array1::zeros(d); params.meta.relation_count];
                    for t in chunk {
                        let r = t.relation;
                        let z = fwd.embeddings.row(r as usize);
                        let ctx_type = g.node_type(t.context);
                        let dist = noise[ctx_type as usize]
                            .as_ref()
                            .expect("context node's type is populated");
                        let neg_ids: Vec<NodeId> =
                            (0..cfg.negatives).map(|_| dist.sample(&mut rng)).collect();
                        let c = params.context_embedding(t.context, r);
                        let neg_views: Vec<_> = neg_ids
                            .iter()
                            .map(|&u| params.context_embedding(u, r))
                            .collect();
                        let (loss, g_nce) = nce_loss(z, c, &neg_views);
                        chunk_loss += loss;
                        seeds[r as usize].scaled_add(scale, &g_nce.z);
                        grads.add_row(
                            context_tid,
                            params.context_row(t.context, r),
                            d,
                            g_nce.context.as_slice().unwrap(),
                            scale,
                        );
                        for (neg_id, dneg) in neg_ids.iter().zip(&g_nce.negatives) {
                            grads.add_row(
                                context_tid,
                                params.context_row(*neg_id, r),
                                d,
                                dneg.as_slice().unwrap(),
                                scale,
                            );
                        }
                    }
                    if !chunk_loss.is_finite() {
                        return Err(ModelError::Diverged {
                            epoch,
                            batch: batch_index,
                        });
                    }
                    let seed_pairs: Vec<_> = fwd
                        .z_vars
                        .iter()
                        .zip(seeds)
                        .filter(|(_, s)| s.iter().any(|&x| x != 0.0))
                        .map(|(var, s)| (*var, s))
                        .collect();
                    tape.backward(&seed_pairs, &mut grads);
                }
                adam.step(&mut params, &grads, cfg.learning_rate);
                grads.reset();
                loss_sum += chunk_loss;
                triple_count += chunk.len();
                batch_index += 1;
            }
        }

        let mean_loss = loss_sum / triple_count as f64;
        let val_auc = validation_auc(&params, g, cfg, validation, epoch)?;
        history.push(EpochRecord {
            epoch,
            mean_loss,
            val_auc,
        });

        if val_auc > best_auc {
            best_auc = val_auc;
            best_epoch = epoch;
            best_params = params.clone();
            bad_epochs = 0;
        } else {
            bad_epochs += 1;
            if bad_epochs >= cfg.patience {
                stopped_early = true;
                break;
            }
        }
    }

    Ok(TrainOutcome {
        model: TrainedModel {
            params: best_params,
            config: cfg.clone(),
        },
        history,
        stopped_early,
        best_epoch,
    })
}

/// Write history as CSV: `epoch,loss,val_roc_auc`.
pub fn write_history_csv(history: &[EpochRecord], path: &Path) -> Result<()> {
    let io = |source| ModelError::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut w = std::io::BufWriter::new(std::fs::File::create(path).map_err(io)?);
    let mut inner = || -> std::io::Result<()> {
        writeln!(w, "epoch,loss,val_roc_auc")?;
        for rec in history {
            writeln!(w, "{},{},{}", rec.epoch, rec.mean_loss, rec.val_auc)?;
        }
        w.flush()
    };
    inner().map_err(io)
}
