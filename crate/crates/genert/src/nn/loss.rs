//! Loss functions: normalized mean squared error for coefficient magnitudes
//! and the (sin, cos) tuple loss for outgoing angles.

use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum LossError {
    ZeroTargetNorm,
    LengthMismatch { pred: usize, target: usize },
}

impl fmt::Display for LossError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LossError::ZeroTargetNorm => write!(f, "nmse target has zero norm"),
            LossError::LengthMismatch { pred, target } => {
                write!(f, "nmse length mismatch: {pred} vs {target}")
            }
        }
    }
}

impl std::error::Error for LossError {}

/// ||pred - target||^2 / ||target||^2.
pub fn nmse(pred: &[f64], target: &[f64]) -> Result<f64, LossError> {
    if pred.len() != target.len() {
        return Err(LossError::LengthMismatch { pred: pred.len(), target: target.len() });
    }
    let denom: f64 = target.iter().map(|t| t * t).sum();
    if denom <= 0.0 {
        return Err(LossError::ZeroTargetNorm);
    }
    let num: f64 = pred.iter().zip(target).map(|(p, t)| (p - t) * (p - t)).sum();
    Ok(num / denom)
}

/// Gradient of [`nmse`] with respect to `pred`.
pub fn nmse_grad(pred: &[f64], target: &[f64]) -> Result<Vec<f64>, LossError> {
    if pred.len() != target.len() {
        return Err(LossError::LengthMismatch { pred: pred.len(), target: target.len() });
    }
    let denom: f64 = target.iter().map(|t| t * t).sum();
    if denom <= 0.0 {
        return Err(LossError::ZeroTargetNorm);
    }
    Ok(pred.iter().zip(target).map(|(p, t)| 2.0 * (p - t) / denom).collect())
}

/// Angle loss on explicit angles:
/// (sin b_hat - sin b)^2 + (cos b_hat - cos b)^2.
pub fn angle_mse(beta_hat: f64, beta: f64) -> f64 {
    angle_mse_pair((beta_hat.sin(), beta_hat.cos()), beta)
}

/// Angle loss taking the predicted (sin, cos) head pair directly.
pub fn angle_mse_pair(sin_cos_hat: (f64, f64), beta: f64) -> f64 {
    let ds = sin_cos_hat.0 - beta.sin();
    let dc = sin_cos_hat.1 - beta.cos();
    ds * ds + dc * dc
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn perfect_prediction_scores_zero() {
        let t = [0.3, -0.7, 1.1];
        assert_eq!(nmse(&t, &t).unwrap(), 0.0);
        assert_eq!(angle_mse(0.4, 0.4), 0.0);
    }

    #[test]
    fn zero_prediction_scores_one() {
        let t = [0.3, -0.7, 1.1];
        assert!((nmse(&[0.0, 0.0, 0.0], &t).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn quarter_turn_angle_error_is_two() {
        assert!((angle_mse(FRAC_PI_2, 0.0) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn zero_target_norm_is_rejected() {
        assert_eq!(nmse(&[1.0], &[0.0]).unwrap_err(), LossError::ZeroTargetNorm);
    }

    #[test]
    fn grad_matches_finite_differences() {
        let pred = [0.4, -0.2, 0.9];
        let target = [0.5, 0.1, 1.0];
        let g = nmse_grad(&pred, &target).unwrap();
        let h = 1e-7;
        for i in 0..pred.len() {
            let mut plus = pred;
            plus[i] += h;
            let mut minus = pred;
            minus[i] -= h;
            let fd = (nmse(&plus, &target).unwrap() - nmse(&minus, &target).unwrap()) / (2.0 * h);
            assert!((fd - g[i]).abs() < 1e-8);
        }
    }
}
