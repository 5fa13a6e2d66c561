//! Bias-corrected Adam over grouped parameter tensors.

use std::collections::HashSet;

use super::params::{Group, ParamStore};

#[derive(Clone, Copy, Debug)]
pub struct AdamConfig {
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        AdamConfig { beta1: 0.9, beta2: 0.999, eps: 1e-8 }
    }
}

/// One Adam update at step `t >= 1` with learning rate `lr`, touching only
/// tensors whose group is trainable. Frozen tensors keep parameters, moments
/// and nothing else changes.
pub fn adam_step(
    store: &mut ParamStore,
    trainable: &HashSet<Group>,
    lr: f64,
    t: usize,
    cfg: &AdamConfig,
) {
    assert!(t >= 1, "Adam step count starts at 1");
    let bc1 = 1.0 - cfg.beta1.powi(t as i32);
    let bc2 = 1.0 - cfg.beta2.powi(t as i32);
    for tensor in &mut store.tensors {
        if !trainable.contains(&tensor.group) {
            continue;
        }
        for i in 0..tensor.data.len() {
            let g = tensor.grad[i];
            tensor.m[i] = cfg.beta1 * tensor.m[i] + (1.0 - cfg.beta1) * g;
            tensor.v[i] = cfg.beta2 * tensor.v[i] + (1.0 - cfg.beta2) * g * g;
            let m_hat = tensor.m[i] / bc1;
            let v_hat = tensor.v[i] / bc2;
            tensor.data[i] -= lr * m_hat / (v_hat.sqrt() + cfg.eps);
        }
    }
}

/// Clears gradient buffers (all groups).
pub fn zero_grads(store: &mut ParamStore) {
    for tensor in &mut store.tensors {
        for g in &mut tensor.grad {
            *g = 0.0;
        }
    }
}

/// Resets optimizer moments (fresh Adam run).
pub fn zero_moments(store: &mut ParamStore) {
    for tensor in &mut store.tensors {
        for m in &mut tensor.m {
            *m = 0.0;
        }
        for v in &mut tensor.v {
            *v = 0.0;
        }
    }
}
