use ndarray::{Array1, ArrayView1};

/// log(sigmoid(x)) without overflow.
pub(crate) fn log_sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        -(-x).exp().ln_1p()
    } else {
        x - x.exp().ln_1p()
    }
}

pub(crate) fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// Exact gradients of one negative-sampling term.
#[derive(Debug, Clone)]
pub struct NceGradients {
    pub z: Array1<f64>,
    pub context: Array1<f64>,
    pub negatives: Vec<Array1<f64>>,
}

/// Negative-sampling loss for one (embedding, context, negatives) triple:
///
/// E = -log sigma(c . z) - sum_i log sigma(-c_i . z)
///
/// where `c_i` are the context embeddings of the sampled negative nodes.
/// Returns the loss and its exact gradients with respect to `z`, `c`, and
/// every `c_i`.
pub fn nce_loss(
    z: ArrayView1<'_, f64>,
    context: ArrayView1<'_, f64>,
    negatives: &[ArrayView1<'_, f64>],
) -> (f64, NceGradients) {
    let pos_dot = context.dot(&z);
    let mut loss = -log_sigmoid(pos_dot);
    // dE/dz from the positive term; dE/dc
    let pos_coeff = -sigmoid(-pos_dot);
    let mut dz = context.mapv(|c| pos_coeff * c);
    let dc = z.mapv(|x| pos_coeff * x);
    let mut dnegs = Vec::with_capacity(negatives.len());
    for neg in negatives {
        let dot = neg.dot(&z);
        loss -= log_sigmoid(-dot);
        let coeff = sigmoid(dot);
        dz.scaled_add(coeff, neg);
        dnegs.push(z.mapv(|x| coeff * x));
    }
    (
        loss,
        NceGradients {
            z: dz,
            context: dc,
            negatives: dnegs,
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::Array1;

    #[test]
    fn zero_dot_products_give_six_ln_two() {
        let z = Array1::zeros(4);
        let c = Array1::from_vec(vec![1.0, -1.0, 0.5, 2.0]);
        let negs: Vec<Array1<f64>> = (0..5).map(|i| Array1::from_elem(4, i as f64)).collect();
        let neg_views: Vec<_> = negs.iter().map(|n| n.view()).collect();
        let (loss, _) = nce_loss(z.view(), c.view(), &neg_views);
        assert!((loss - 6.0 * std::f64::consts::LN_2).abs() < 1e-12);
    }

    #[test]
    fn perfectly_separated_scores_drive_loss_to_zero() {
        let z = Array1::from_vec(vec![30.0, 0.0]);
        let c = Array1::from_vec(vec![1.0, 0.0]);
        let neg = Array1::from_vec(vec![-1.0, 0.0]);
        let (loss, _) = nce_loss(z.view(), c.view(), &[neg.view()]);
        assert!(loss < 1e-10);
    }

    #[test]
    fn gradients_match_central_differences() {
        let dims = 5;
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            ((state >> 33) as f64 / (1u64 << 31) as f64) - 1.0
        };
        let z = Array1::from_shape_fn(dims, |_| next());
        let c = Array1::from_shape_fn(dims, |_| next());
        let negs: Vec<Array1<f64>> = (0..3)
            .map(|_| Array1::from_shape_fn(dims, |_| next()))
            .collect();
        let views: Vec<_> = negs.iter().map(|n| n.view()).collect();
        let (_, grads) = nce_loss(z.view(), c.view(), &views);

        let eps = 1e-5;
        let loss_at = |z: &Array1<f64>, c: &Array1<f64>, negs: &[Array1<f64>]| {
            let views: Vec<_> = negs.iter().map(|n| n.view()).collect();
            nce_loss(z.view(), c.view(), &views).0
        };
        let rel = |a: f64, n: f64| (a - n).abs() / (a.abs() + n.abs()).max(1e-6);

        for i in 0..dims {
            let mut zp = z.clone();
            let mut zm = z.clone();
            zp[i] += eps;
            zm[i] -= eps;
            let fd = (loss_at(&zp, &c, &negs) - loss_at(&zm, &c, &negs)) / (2.0 * eps);
            assert!(rel(grads.z[i], fd) < 1e-4, "z[{i}]: {} vs {fd}", grads.z[i]);

            let mut cp = c.clone();
            let mut cm = c.clone();
            cp[i] += eps;
            cm[i] -= eps;
            let fd = (loss_at(&z, &cp, &negs) - loss_at(&z, &cm, &negs)) / (2.0 * eps);
            assert!(rel(grads.context[i], fd) < 1e-4);

            for (k, neg) in negs.iter().enumerate() {
                let mut np = negs.clone();
                let mut nm = negs.clone();
                np[k][i] = neg[i] + eps;
                nm[k][i] = neg[i] - eps;
                let fd = (loss_at(&z, &c, &np) - loss_at(&z, &c, &nm)) / (2.0 * eps);
                assert!(rel(grads.negatives[k][i], fd) < 1e-4);
            }
        }
    }
}
