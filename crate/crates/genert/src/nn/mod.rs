//! Minimal neural-network engine for the fixed predictor topology: dense
//! layers, ReLU, embedding lookup, residual blocks, positional encoding,
//! reverse-mode gradients on a small tape, Adam, and the two loss functions.
//!
//! Everything is 64-bit; the networks are tiny and the gradient checks want
//! the headroom.

mod adam;
mod checkpoint;
mod loss;
mod params;
mod tape;

pub use adam::{adam_step, zero_grads, AdamConfig};
pub use checkpoint::{load_checkpoint, save_checkpoint, Checkpoint, CheckpointError};
pub use loss::{angle_mse, angle_mse_pair, nmse, nmse_grad, LossError};
pub use params::{xavier_init, Group, ParamStore, ParamTensor, TensorId};
pub use tape::{NodeId, Tape};

use std::sync::atomic::{AtomicBool, Ordering};

static POS_ENC_CLAMP_LOGGED: AtomicBool = AtomicBool::new(false);

/// Positional encoding of an angle:
/// [sin(2^1 x), cos(2^1 x), ..., sin(2^L x), cos(2^L x)].
///
/// Inputs outside the stated (0, pi/2) domain are clamped; the first clamp is
/// logged so silently saturating features stay visible.
pub fn pos_enc(x: f64, l: usize) -> Vec<f64> {
    assert!(l >= 1, "encoding dimension must be at least 1");
    let clamped = x.clamp(0.0, std::f64::consts::FRAC_PI_2);
    if clamped != x && !POS_ENC_CLAMP_LOGGED.swap(true, Ordering::Relaxed) {
        log::warn!("pos_enc input {x} outside (0, pi/2); clamping (logged once)");
    }
    let mut out = Vec::with_capacity(2 * l);
    for level in 1..=l {
        let arg = (1u64 << level) as f64 * clamped;
        out.push(arg.sin());
        out.push(arg.cos());
    }
    out
}
