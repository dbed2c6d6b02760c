use ndarray::Array1;

use crate::config::Activation;
use crate::params::{GradStore, ModelParameters, TensorId};

/// Handle to one tape value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Var(usize);

#[derive(Debug)]
enum Op {
    /// Leaf without gradient (input features, frozen vectors).
    Constant,
    /// y = W x
    MatVec { w: TensorId, x: Var },
    /// y = W^T x
    VecMat { w: TensorId, x: Var },
    AddBias { x: Var, b: TensorId },
    Add { a: Var, b: Var },
    /// Elementwise mean of a nonempty list.
    Mean { xs: Vec<Var> },
    Activation { x: Var, f: Activation },
    Tanh { x: Var },
    Softmax { x: Var },
    /// y = sum_i weights[i] * xs[i]
    Mix { weights: Var, xs: Vec<Var> },
}

/// Reverse-mode tape over vector values. Values are computed eagerly on
/// record; `backward` walks the op list in reverse, accumulating parameter
/// gradients into a [`GradStore`].
pub struct Tape<'p> {
    params: &'p ModelParameters,
    ops: Vec<Op>,
    values: Vec<Array1<f64>>,
}

impl<'p> Tape<'p> {
    pub fn new(params: &'p ModelParameters) -> Self {
        Tape {
            params,
            ops: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn params(&self) -> &'p ModelParameters {
        self.params
    }

    pub fn value(&self, v: Var) -> &Array1<f64> {
        &self.values[v.0]
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    fn push(&mut self, op: Op, value: Array1<f64>) -> Var {
        self.ops.push(op);
        self.values.push(value);
        Var(self.values.len() - 1)
    }

    pub fn constant(&mut self, value: Array1<f64>) -> Var {
        self.push(Op::Constant, value)
    }

    pub fn zeros(&mut self, len: usize) -> Var {
        self.push(Op::Constant, Array1::zeros(len))
    }

    pub fn matvec(&mut self, w: TensorId, x: Var) -> Var {
        let value = self.params.tensors[w].data.mat().dot(&self.values[x.0]);
        self.push(Op::MatVec { w, x }, value)
    }

    pub fn vecmat(&mut self, w: TensorId, x: Var) -> Var {
        let value = self.params.tensors[w].data.mat().t().dot(&self.values[x.0]);
        self.push(Op::VecMat { w, x }, value)
    }

    pub fn add_bias(&mut self, x: Var, b: TensorId) -> Var {
        let value = &self.values[x.0] + self.params.tensors[b].data.vec();
        self.push(Op::AddBias { x, b }, value)
    }

    pub fn add(&mut self, a: Var, b: Var) -> Var {
        let value = &self.values[a.0] + &self.values[b.0];
        self.push(Op::Add { a, b }, value)
    }

    pub fn mean(&mut self, xs: Vec<Var>) -> Var {
        assert!(!xs.is_empty(), "mean of an empty list");
        let mut acc = self.values[xs[0].0].clone();
        for v in &xs[1..] {
            acc += &self.values[v.0];
        }
        acc /= xs.len() as f64;
        self.push(Op::Mean { xs }, acc)
    }

    pub fn activation(&mut self, x: Var, f: Activation) -> Var {
        let value = self.values[x.0].mapv(|t| f.apply(t));
        self.push(Op::Activation { x, f }, value)
    }

    pub fn tanh(&mut self, x: Var) -> Var {
        let value = self.values[x.0].mapv(f64::tanh);
        self.push(Op::Tanh { x }, value)
    }

    pub fn softmax(&mut self, x: Var) -> Var {
        let input = &self.values[x.0];
        let max = input.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
        let exps = input.mapv(|t| (t - max).exp());
        let sum = exps.sum();
        self.push(Op::Softmax { x }, exps / sum)
    }

    pub fn mix(&mut self, weights: Var, xs: Vec<Var>) -> Var {
        assert_eq!(self.values[weights.0].len(), xs.len());
        let dim = self.values[xs[0].0].len();
        let mut acc = Array1::zeros(dim);
        for (i, v) in xs.iter().enumerate() {
            let w = self.values[weights.0][i];
            acc.scaled_add(w, &self.values[v.0]);
        }
        self.push(Op::Mix { weights, xs }, acc)
    }

    /// Backpropagate from seeded output vars; parameter gradients accumulate
    /// into `grads`.
    pub fn backward(&self, seeds: &[(Var, Array1<f64>)], grads: &mut GradStore) {
        let mut adjoint: Vec<Option<Array1<f64>>> = vec![None; self.values.len()];
        for (var, seed) in seeds {
            match &mut adjoint[var.0] {
                Some(g) => *g += seed,
                slot => *slot = Some(seed.clone()),
            }
        }
        for idx in (0..self.ops.len()).rev() {
            let Some(g) = adjoint[idx].take() else {
                continue;
            };
            match &self.ops[idx] {
                Op::Constant => {}
                Op::MatVec { w, x } => {
                    let mat = self.params.tensors[*w].data.mat();
                    let dx = mat.t().dot(&g);
                    accumulate(&mut adjoint, *x, dx);
                    grads.add_outer(
                        *w,
                        g.as_slice().unwrap(),
                        self.values[x.0].as_slice().unwrap(),
                    );
                }
                Op::VecMat { w, x } => {
                    let mat = self.params.tensors[*w].data.mat();
                    let dx = mat.dot(&g);
                    accumulate(&mut adjoint, *x, dx);
                    grads.add_outer(
                        *w,
                        self.values[x.0].as_slice().unwrap(),
                        g.as_slice().unwrap(),
                    );
                }
                Op::AddBias { x, b } => {
                    grads.add_vec(*b, g.as_slice().unwrap());
                    accumulate(&mut adjoint, *x, g);
                }
                Op::Add { a, b } => {
                    accumulate(&mut adjoint, *a, g.clone());
                    accumulate(&mut adjoint, *b, g);
                }
                Op::Mean { xs } => {
                    let scaled = &g / xs.len() as f64;
                    for x in xs {
                        accumulate(&mut adjoint, *x, scaled.clone());
                    }
                }
                Op::Activation { x, f } => {
                    let dx = ndarray::Zip::from(&g)
                        .and(&self.values[x.0])
                        .map_collect(|&gi, &xi| gi * f.derivative(xi));
                    accumulate(&mut adjoint, *x, dx);
                }
                Op::Tanh { x } => {
                    let dx = ndarray::Zip::from(&g)
                        .and(&self.values[idx])
                        .map_collect(|&gi, &yi| gi * (1.0 - yi * yi));
                    accumulate(&mut adjoint, *x, dx);
                }
                Op::Softmax { x } => {
                    let y = &self.values[idx];
                    let dot = g.dot(y);
                    let dx = ndarray::Zip::from(&g)
                        .and(y)
                        .map_collect(|&gi, &yi| yi * (gi - dot));
                    accumulate(&mut adjoint, *x, dx);
                }
                Op::Mix { weights, xs } => {
                    let mut dw = Array1::zeros(xs.len());
                    for (i, x) in xs.iter().enumerate() {
                        dw[i] = g.dot(&self.values[x.0]);
                        let wi = self.values[weights.0][i];
                        if wi != 0.0 {
                            accumulate(&mut adjoint, *x, &g * wi);
                        }
                    }
                    accumulate(&mut adjoint, *weights, dw);
                }
            }
        }
    }
}

fn accumulate(adjoint: &mut [Option<Array1<f64>>], var: Var, g: Array1<f64>) {
    match &mut adjoint[var.0] {
        Some(slot) => *slot += &g,
        slot => *slot = Some(g),
    }
}
