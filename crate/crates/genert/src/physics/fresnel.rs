//! Fresnel reflection coefficients for a lossy half-space and composition of
//! the reflected field from its polarization components.

use num_complex::Complex64;

use crate::math::VACUUM_PERMITTIVITY;
use crate::scene::Material;

/// Reflection coefficients (perpendicular, parallel) of a half-space with
/// complex relative permittivity eps = eps_r - j sigma / (2 pi f eps0), air
/// on the incident side.
///
/// `alpha` is the incidence angle from the surface normal, [0, pi/2).
pub fn fresnel_coefficients(mat: &Material, alpha: f64, frequency: f64) -> (Complex64, Complex64) {
    let omega = 2.0 * std::f64::consts::PI * frequency;
    let eps = Complex64::new(mat.relative_permittivity, -mat.conductivity / (omega * VACUUM_PERMITTIVITY));
    let cos_a = alpha.cos();
    let sin2 = alpha.sin() * alpha.sin();
    // Principal branch keeps Re >= 0 and Im <= 0 for passive materials.
    let root = (eps - Complex64::new(sin2, 0.0)).sqrt();
    let gamma_perp = (Complex64::new(cos_a, 0.0) - root) / (Complex64::new(cos_a, 0.0) + root);
    let gamma_par = (eps * cos_a - root) / (eps * cos_a + root);
    (gamma_perp, gamma_par)
}

/// Reflected field of a unit-magnitude incident wave with polarization angle
/// `psi`: the perpendicular component carries sin(psi) of the field, the
/// parallel component cos(psi).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReflectedField {
    pub e_perp_r: Complex64,
    pub e_par_r: Complex64,
    /// Effective scalar coefficient: field-magnitude ratio with the phase of
    /// the dominant component.
    pub gamma_eff: Complex64,
}

impl ReflectedField {
    pub fn magnitude(&self) -> f64 {
        self.gamma_eff.norm()
    }
}

pub fn reflect_field(gamma_perp: Complex64, gamma_par: Complex64, psi: f64) -> ReflectedField {
    let e_perp_r = gamma_perp * psi.sin();
    let e_par_r = gamma_par * psi.cos();
    let mag = (e_perp_r.norm_sqr() + e_par_r.norm_sqr()).sqrt();
    let dominant = if e_perp_r.norm() >= e_par_r.norm() { e_perp_r } else { e_par_r };
    let phase = if dominant.norm() > 0.0 { dominant.arg() } else { 0.0 };
    ReflectedField {
        e_perp_r,
        e_par_r,
        gamma_eff: Complex64::from_polar(mag, phase),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const F: f64 = 3.5e9;

    fn lossless(eps_r: f64) -> Material {
        Material { relative_permittivity: eps_r, conductivity: 0.0 }
    }

    #[test]
    fn normal_incidence_matches_one_minus_n_over_one_plus_n() {
        let (gp, gpar) = fresnel_coefficients(&lossless(4.0), 0.0, F);
        assert!((gp.norm() - 1.0 / 3.0).abs() < 1e-12);
        assert!((gpar.norm() - 1.0 / 3.0).abs() < 1e-12);
        // Magnitudes agree at normal incidence for lossy materials too.
        let mat = Material { relative_permittivity: 6.0, conductivity: 0.3 };
        let (a, b) = fresnel_coefficients(&mat, 0.0, F);
        assert!((a.norm() - b.norm()).abs() < 1e-12);
    }

    #[test]
    fn brewster_angle_nulls_parallel_component() {
        for eps_r in [1.5_f64, 2.0, 4.0, 6.0, 10.0] {
            let theta_b = eps_r.sqrt().atan();
            let (_, gpar) = fresnel_coefficients(&lossless(eps_r), theta_b, F);
            assert!(gpar.norm() < 1e-10, "eps_r={eps_r}: |gpar|={}", gpar.norm());
        }
        // The specific worked case: eps_r = 4, alpha = arctan 2.
        let (_, gpar) = fresnel_coefficients(&lossless(4.0), 2.0_f64.atan(), F);
        assert!(gpar.norm() < 1e-12);
    }

    #[test]
    fn grazing_incidence_approaches_total_reflection() {
        let (gp, gpar) = fresnel_coefficients(&lossless(4.0), 89.9_f64.to_radians(), F);
        assert!((gp.norm() - 1.0).abs() < 0.02);
        assert!((gpar.norm() - 1.0).abs() < 0.02);
    }

    #[test]
    fn perpendicular_magnitude_is_monotone_for_lossless_dielectrics() {
        for eps_r in [1.5, 2.0, 4.0, 10.0] {
            let mat = lossless(eps_r);
            let mut prev = -1.0;
            for i in 0..=899 {
                let alpha = (i as f64) * 0.1_f64.to_radians();
                let (gp, _) = fresnel_coefficients(&mat, alpha, F);
                assert!(gp.norm() >= prev - 1e-12);
                prev = gp.norm();
            }
        }
    }

    #[test]
    fn passivity_over_material_grid() {
        for eps_r in [1.5, 2.0, 4.0, 6.0, 10.0] {
            for sigma in [0.0, 0.01, 0.1, 1.0] {
                let mat = Material { relative_permittivity: eps_r, conductivity: sigma };
                for deg in 0..=89 {
                    let (gp, gpar) = fresnel_coefficients(&mat, (deg as f64).to_radians(), F);
                    assert!(gp.norm() <= 1.0 + 1e-12);
                    assert!(gpar.norm() <= 1.0 + 1e-12);
                }
            }
        }
    }

    #[test]
    fn reflect_field_selects_components_by_psi() {
        let gp = Complex64::new(0.5, 0.0);
        let gpar = Complex64::new(0.2, 0.0);
        let f0 = reflect_field(gp, gpar, 0.0);
        assert!(f0.e_perp_r.norm() < 1e-15);
        assert!((f0.magnitude() - 0.2).abs() < 1e-12);
        let f90 = reflect_field(gp, gpar, std::f64::consts::FRAC_PI_2);
        assert!(f90.e_par_r.norm() < 1e-15);
        assert!((f90.magnitude() - 0.5).abs() < 1e-12);
        let f45 = reflect_field(gp, gpar, std::f64::consts::FRAC_PI_4);
        assert!((f45.magnitude() - (0.125_f64 + 0.02).sqrt()).abs() < 1e-12);
        assert!((f45.magnitude() - 0.38079).abs() < 1e-5);
    }

    #[test]
    fn perfect_conductor_preserves_field_magnitude() {
        // |Gamma_perp| = |Gamma_par| = 1: the sin/cos weighting must keep the
        // full field magnitude for every psi.
        let one = Complex64::new(-1.0, 0.0);
        for i in 0..=40 {
            let psi = i as f64 * std::f64::consts::PI / 40.0;
            let f = reflect_field(one, one, psi);
            assert!((f.magnitude() - 1.0).abs() < 1e-12);
        }
    }
}
