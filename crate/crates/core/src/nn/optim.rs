//! Adam optimizer with bias correction.

use crate::nn::params::{Grads, ParamStore};

#[derive(Debug, Clone, Copy)]
pub struct AdamParams {
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
}

impl Default for AdamParams {
    fn default() -> AdamParams {
        AdamParams {
            lr: 1e-3,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
        }
    }
}

/// One in-place update of every parameter from its gradient.
pub fn adam_step(store: &mut ParamStore, grads: &Grads, hp: &AdamParams) {
    store.step += 1;
    let t = store.step as i32;
    let bc1 = 1.0 - hp.beta1.powi(t);
    let bc2 = 1.0 - hp.beta2.powi(t);
    for idx in 0..store.len() {
        let g = grads.param_slice(idx).to_vec();
        let p = store.param_mut(idx);
        let data = std::sync::Arc::make_mut(&mut p.data);
        for i in 0..data.len() {
            p.m[i] = hp.beta1 * p.m[i] + (1.0 - hp.beta1) * g[i];
            p.v[i] = hp.beta2 * p.v[i] + (1.0 - hp.beta2) * g[i] * g[i];
            let m_hat = p.m[i] / bc1;
            let v_hat = p.v[i] / bc2;
            data[i] -= hp.lr * m_hat / (v_hat.sqrt() + hp.eps);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nn::params::{Grads, Init, ParamStore};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn first_step_moves_by_lr_times_sign() {
        // With zero state, bias correction makes the first update
        // lr * g / (|g| + eps) regardless of gradient magnitude.
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut store = ParamStore::new();
        let id = store.add("w", 1, 2, Init::Zeros, &mut rng);
        let mut g = Grads::zeros_like(&store);
        g.add_to(id, &[0.001, -250.0]);
        let hp = AdamParams {
            lr: 0.1,
            ..AdamParams::default()
        };
        adam_step(&mut store, &g, &hp);
        let w = &store.get(id).data;
        assert!((w[0] + 0.1).abs() < 1e-4, "{w:?}");
        assert!((w[1] - 0.1).abs() < 1e-4, "{w:?}");
        assert_eq!(store.step_count(), 1);
    }

    #[test]
    fn converges_on_quadratic() {
        // Minimize (w - 3)^2 from w = 0; gradient is 2(w - 3).
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut store = ParamStore::new();
        let id = store.add("w", 1, 1, Init::Zeros, &mut rng);
        let hp = AdamParams {
            lr: 0.1,
            ..AdamParams::default()
        };
        for _ in 0..200 {
            let w = store.get(id).data[0];
            let mut g = Grads::zeros_like(&store);
            g.add_to(id, &[2.0 * (w - 3.0)]);
            adam_step(&mut store, &g, &hp);
        }
        let w = store.get(id).data[0];
        assert!((w - 3.0).abs() < 1e-2, "ended at {w}");
    }

    #[test]
    fn zero_gradient_leaves_params_fixed() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut store = ParamStore::new();
        let id = store.add("w", 2, 2, Init::UniformFanIn { fan_in: 2 }, &mut rng);
        let before = store.get(id).data.as_ref().clone();
        let g = Grads::zeros_like(&store);
        adam_step(&mut store, &g, &AdamParams::default());
        assert_eq!(store.get(id).data.as_ref(), &before);
    }
}
