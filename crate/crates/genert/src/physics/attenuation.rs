//! Complex path attenuation: free-space spreading, interaction coefficients
//! and propagation phase.

use num_complex::Complex64;

use super::PhysicsError;
use crate::math::SPEED_OF_LIGHT;

/// Total attenuation coefficient of one path:
///
/// a = (lambda / (4 pi d)) * prod(gammas) * exp(-j 2 pi d / lambda)
pub fn path_attenuation(
    d: f64,
    gammas: &[Complex64],
    frequency: f64,
) -> Result<Complex64, PhysicsError> {
    if !(d > 0.0) {
        return Err(PhysicsError::NonPositiveDistance(d));
    }
    let lambda = SPEED_OF_LIGHT / frequency;
    let product: Complex64 = gammas.iter().product();
    Ok(attenuation_from_product(d, product, lambda))
}

/// Same composition with the interaction product already accumulated.
pub fn attenuation_from_product(d: f64, gamma_product: Complex64, lambda: f64) -> Complex64 {
    let spreading = lambda / (4.0 * std::f64::consts::PI * d);
    let phase = Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * d / lambda);
    spreading * gamma_product * phase
}

#[cfg(test)]
mod tests {
    use super::*;

    const F: f64 = 3.5e9;

    #[test]
    fn friis_free_space_loss_at_100m() {
        let a = path_attenuation(100.0, &[], F).unwrap();
        let loss_db = -20.0 * a.norm().log10();
        assert!((loss_db - 83.329144).abs() < 1e-4);
    }

    #[test]
    fn phase_wraps_at_one_wavelength() {
        let lambda = SPEED_OF_LIGHT / F;
        let a = path_attenuation(lambda, &[], F).unwrap();
        assert!(a.im.abs() < 1e-12 * a.norm());
        assert!(a.re > 0.0);
    }

    #[test]
    fn single_interaction_halves_magnitude() {
        let free = path_attenuation(50.0, &[], F).unwrap();
        let with = path_attenuation(50.0, &[Complex64::new(0.5, 0.0)], F).unwrap();
        assert!((with.norm() - 0.5 * free.norm()).abs() < 1e-15);
    }

    #[test]
    fn non_positive_distance_is_rejected() {
        assert!(path_attenuation(0.0, &[], F).is_err());
        assert!(path_attenuation(-1.0, &[], F).is_err());
    }

    #[test]
    fn passive_interactions_only_attenuate() {
        let lambda = SPEED_OF_LIGHT / F;
        let a = path_attenuation(123.0, &[Complex64::new(-0.7, 0.1)], F).unwrap();
        assert!(a.norm() <= lambda / (4.0 * std::f64::consts::PI * 123.0) + 1e-18);
    }
}
