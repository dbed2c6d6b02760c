use walker::NoiseKind;

use crate::{ModelError, Result};

/// Nonlinearity applied inside each relation convolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Activation {
    Elu,
    Tanh,
}

impl Activation {
    pub fn apply(self, x: f64) -> f64 {
        match self {
            Activation::Elu => {
                if x >= 0.0 {
                    x
                } else {
                    x.exp() - 1.0
                }
            }
            Activation::Tanh => x.tanh(),
        }
    }

    pub fn derivative(self, x: f64) -> f64 {
        match self {
            Activation::Elu => {
                if x >= 0.0 {
                    1.0
                } else {
                    x.exp()
                }
            }
            Activation::Tanh => {
                let t = x.tanh();
                1.0 - t * t
            }
        }
    }
}

/// Whether relational self-attention mixes the per-relation representations
/// (`Full`) or each relation axis stays isolated (`Disabled`, the ablation).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AttentionMode {
    Full,
    Disabled,
}

/// Training hyperparameters. Defaults follow the reference configuration:
/// d = 200, d_a = 20, K = 2, 20 walks of length 10, window 5, 5 negatives,
/// at most 50 epochs with patience 3, Adam at 0.001, neighbor budget 10.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub embedding_dim: usize,
    pub attention_dim: usize,
    pub k_levels: usize,
    pub walks_per_node: usize,
    pub walk_length: usize,
    pub window: usize,
    pub negatives: usize,
    pub max_epochs: usize,
    pub patience: usize,
    pub learning_rate: f64,
    pub neighbor_budget: usize,
    pub activation: Activation,
    pub seed: u64,
    /// Triples per optimizer step within one center node's group.
    pub batch_triples: usize,
    pub noise: NoiseKind,
    /// One context embedding per node (shared across relations) by default;
    /// set to use a separate context row per (node, relation).
    pub per_relation_context: bool,
    pub attention: AttentionMode,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            embedding_dim: 200,
            attention_dim: 20,
            k_levels: 2,
            walks_per_node: 20,
            walk_length: 10,
            window: 5,
            negatives: 5,
            max_epochs: 50,
            patience: 3,
            learning_rate: 0.001,
            neighbor_budget: 10,
            activation: Activation::Elu,
            seed: 0,
            batch_triples: 512,
            noise: NoiseKind::Uniform,
            per_relation_context: false,
            attention: AttentionMode::Full,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("embedding_dim", self.embedding_dim),
            ("attention_dim", self.attention_dim),
            ("k_levels", self.k_levels),
            ("walks_per_node", self.walks_per_node),
            ("window", self.window),
            ("negatives", self.negatives),
            ("max_epochs", self.max_epochs),
            ("patience", self.patience),
            ("neighbor_budget", self.neighbor_budget),
            ("batch_triples", self.batch_triples),
        ];
        for (name, value) in positive {
            if value == 0 {
                return Err(ModelError::BadConfig(format!("{name} must be positive")));
            }
        }
        if self.walk_length < 2 {
            return Err(ModelError::BadConfig("walk_length must be at least 2".into()));
        }
        if !(self.learning_rate > 0.0) {
            return Err(ModelError::BadConfig("learning_rate must be positive".into()));
        }
        Ok(())
    }

    pub fn budgets(&self) -> Vec<usize> {
        vec![self.neighbor_budget; self.k_levels]
    }
}
