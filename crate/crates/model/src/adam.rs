use crate::params::{GradStore, ModelParameters};

/// Adam with the canonical constants: beta1 = 0.9, beta2 = 0.999,
/// epsilon = 1e-8, bias-corrected moments.
#[derive(Debug, Clone)]
pub struct Adam {
    m: Vec<Vec<f64>>,
    v: Vec<Vec<f64>>,
    step: u64,
    beta1: f64,
    beta2: f64,
    epsilon: f64,
}

impl Adam {
    pub fn new(params: &ModelParameters) -> Self {
        Adam {
            m: params
                .tensors
                .iter()
                .map(|t| vec![0.0; t.data.len()])
                .collect(),
            v: params
                .tensors
                .iter()
                .map(|t| vec![0.0; t.data.len()])
                .collect(),
            step: 0,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        }
    }

    pub fn step_count(&self) -> u64 {
        self.step
    }

    pub fn step(&mut self, params: &mut ModelParameters, grads: &GradStore, lr: f64) {
        self.step += 1;
        let correction1 = 1.0 - self.beta1.powi(self.step as i32);
        let correction2 = 1.0 - self.beta2.powi(self.step as i32);
        let scale = lr * correction2.sqrt() / correction1;
        for (tid, tensor) in params.tensors.iter_mut().enumerate() {
            let data = tensor.data.flat_mut();
            let g = &grads.grads[tid];
            let m = &mut self.m[tid];
            let v = &mut self.v[tid];
            for i in 0..data.len() {
                m[i] = self.beta1 * m[i] + (1.0 - self.beta1) * g[i];
                v[i] = self.beta2 * v[i] + (1.0 - self.beta2) * g[i] * g[i];
                data[i] -= scale * m[i] / (v[i].sqrt() + self.epsilon);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::TrainConfig;
    use graph_core::graph_from_parts;
    use ndarray::Array2;

    #[test]
    fn adam_descends_on_a_quadratic() {
        // minimize sum(w^2) over one tensor by feeding grad = 2w
        let g = graph_from_parts(
            vec![0, 0],
            vec!["t".into()],
            vec!["e".into()],
            vec![(0, 0, 1)],
            vec![Array2::from_elem((2, 2), 1.0)],
            true,
        )
        .unwrap();
        let cfg = TrainConfig {
            embedding_dim: 3,
            attention_dim: 2,
            k_levels: 1,
            ..Default::default()
        };
        let mut params = crate::params::ModelParameters::init(&g, &cfg).unwrap();
        let mut adam = Adam::new(&params);
        let start: f64 = params.tensors[0].data.flat().iter().map(|w| w * w).sum();
        for _ in 0..200 {
            let mut grads = GradStore::zeros_like(&params);
            for (slot, &w) in grads.grads[0]
                .iter_mut()
                .zip(params.tensors[0].data.flat())
            {
                *slot = 2.0 * w;
            }
            adam.step(&mut params, &grads, 0.05);
        }
        let end: f64 = params.tensors[0].data.flat().iter().map(|w| w * w).sum();
        assert!(end < start * 0.01, "{end} vs {start}");
    }
}
