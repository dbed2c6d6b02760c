use graph_core::{graph_from_parts, MultiplexGraph};
use model::{ModelParameters, TensorData, TensorId, TrainConfig};
use ndarray::{Array1, Array2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn single_type_graph(
    n: usize,
    edges: &[(u16, u32, u32)],
    feat_dim: usize,
    seed: u64,
) -> MultiplexGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edge_types = edges.iter().map(|e| e.0).max().unwrap_or(0) + 1;
    let features = Array2::from_shape_fn((n, feat_dim), |_| rng.random_range(-1.0..1.0));
    graph_from_parts(
        vec![0; n],
        vec!["t".into()],
        (0..edge_types).map(|i| format!("e{i}")).collect(),
        edges.to_vec(),
        vec![features],
        true,
    )
    .unwrap()
}

pub fn random_multiplex(n: usize, relations: u16, p: f64, feat_dim: usize, seed: u64) -> MultiplexGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for r in 0..relations {
        for a in 0..n as u32 {
            for b in (a + 1)..n as u32 {
                if rng.random_bool(p) {
                    edges.push((r, a, b));
                }
            }
        }
        // anchor so every relation exists even on unlucky seeds
        edges.push((r, 0, 1 + (r as u32 % (n as u32 - 1))));
    }
    single_type_graph(n, &edges, feat_dim, seed ^ 0xfeed)
}

pub fn set_mat(params: &mut ModelParameters, tid: TensorId, values: Array2<f64>) {
    match &mut params.tensors[tid].data {
        TensorData::Mat(m) => {
            assert_eq!(m.dim(), values.dim(), "tensor {tid} shape");
            *m = values;
        }
        TensorData::Vec1(_) => panic!("tensor {tid} is a vector"),
    }
}

pub fn set_vec(params: &mut ModelParameters, tid: TensorId, values: Array1<f64>) {
    match &mut params.tensors[tid].data {
        TensorData::Vec1(v) => {
            assert_eq!(v.len(), values.len(), "tensor {tid} length");
            *v = values;
        }
        TensorData::Mat(_) => panic!("tensor {tid} is a matrix"),
    }
}

pub fn zero_all(params: &mut ModelParameters) {
    for t in &mut params.tensors {
        t.data.flat_mut().fill(0.0);
    }
}

pub fn small_config(d: usize, d_a: usize, k: usize, seed: u64) -> TrainConfig {
    TrainConfig {
        embedding_dim: d,
        attention_dim: d_a,
        k_levels: k,
        walks_per_node: 2,
        walk_length: 5,
        window: 2,
        negatives: 2,
        max_epochs: 3,
        patience: 2,
        neighbor_budget: 3,
        seed,
        batch_triples: 64,
        ..Default::default()
    }
}
