//! Ray launching on a spherical Fibonacci lattice.
//!
//! For an angular spacing of `s` radians the launcher emits
//! N = ceil(4 pi / s^2) quasi-uniform unit directions, so each ray owns a
//! solid angle of roughly s^2 without the polar clustering of a
//! latitude/longitude grid.

use super::{GeomError, RayState, TxConfig};
use crate::math::Vec3;

/// Number of rays for a given angular spacing.
pub fn ray_count(angular_spacing: f64) -> usize {
    (4.0 * std::f64::consts::PI / (angular_spacing * angular_spacing)).ceil() as usize
}

/// Unit direction of lattice point `i` of `n`.
pub fn lattice_direction(i: usize, n: usize) -> Vec3 {
    // Golden-angle spiral: z descends uniformly, azimuth advances by the
    // golden angle per point.
    let golden_angle = std::f64::consts::PI * (3.0 - 5.0_f64.sqrt());
    let z = 1.0 - 2.0 * (i as f64 + 0.5) / n as f64;
    let r = (1.0 - z * z).max(0.0).sqrt();
    let phi = golden_angle * i as f64;
    Vec3::new(r * phi.cos(), r * phi.sin(), z)
}

/// Launches quasi-uniform rays from the transmitter; every returned state is
/// fresh (no interactions, cumulative coefficient 1).
pub fn launch_rays(tx: &TxConfig, angular_spacing: f64) -> Result<Vec<RayState>, GeomError> {
    if !(angular_spacing > 0.0 && angular_spacing <= std::f64::consts::FRAC_PI_2) {
        return Err(GeomError::InvalidSpacing(angular_spacing));
    }
    let _ = tx; // launch depends only on the spacing; origin is applied by the tracer
    let n = ray_count(angular_spacing);
    Ok((0..n).map(|i| RayState::new(lattice_direction(i, n))).collect())
}
