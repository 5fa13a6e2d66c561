//! Fresnel oracle interaction model: the classical ground-truth generator
//! plugged into the tracer.
//!
//! Reflection is specular (outgoing angle equals incident angle) and the
//! interaction coefficient is the effective field-magnitude ratio of the
//! Fresnel-weighted polarization components, with a fixed pi phase per
//! reflection. The complex component fields remain available through
//! [`super::reflect_field`] for tests.

use num_complex::Complex64;

use super::fresnel::{fresnel_coefficients, reflect_field};
use crate::geom::{InteractionGeom, InteractionModel};
use crate::scene::{Environment, Humidity, Material};

/// Specular Fresnel interaction model over an environment's material table.
pub struct OracleModel {
    materials: Vec<Material>,
    frequency: f64,
}

impl OracleModel {
    /// Resolves the material of every semantic class up front so interaction
    /// lookups are constant-time.
    pub fn new(env: &Environment, humidity: Humidity, frequency: f64) -> Self {
        let mut materials = Vec::with_capacity(env.vocab_size());
        for class in env.classes() {
            let mat = env
                .material_for(class.id, humidity)
                .expect("loader guarantees a dry entry per class");
            materials.push(mat);
        }
        OracleModel { materials, frequency }
    }

    pub fn material(&self, class_id: u32) -> &Material {
        &self.materials[class_id as usize]
    }

    /// Effective interaction coefficient magnitude for given incidence and
    /// polarization angles.
    pub fn gamma_eff_magnitude(&self, class_id: u32, alpha: f64, psi: f64) -> f64 {
        let (gp, gpar) = fresnel_coefficients(self.material(class_id), alpha, self.frequency);
        reflect_field(gp, gpar, psi).magnitude()
    }
}

impl InteractionModel for OracleModel {
    fn interact(&self, geom: &InteractionGeom, _cum_gamma: Complex64) -> (f64, Complex64) {
        let mag = self.gamma_eff_magnitude(geom.class_id, geom.alpha, geom.psi);
        (geom.alpha, Complex64::new(-mag, 0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::Vec3;
    use crate::scene::{Aabb, SemanticClass, Surface};
    use std::collections::HashMap;

    fn one_class_env(mat: Material) -> Environment {
        let s = Surface {
            id: 0,
            class_id: 0,
            vertices: [Vec3::ZERO, Vec3::new(1.0, 0.0, 0.0), Vec3::new(0.0, 1.0, 0.0)],
            normal: Vec3::Z,
        };
        let mut materials = HashMap::new();
        materials.insert((0, Humidity::Dry), mat);
        Environment::from_parts(
            vec![s],
            vec![SemanticClass { id: 0, name: "c".into(), one_hot_index: 0 }],
            materials,
            Aabb { min: Vec3::new(-1.0, -1.0, -1.0), max: Vec3::new(2.0, 2.0, 2.0) },
        )
    }

    #[test]
    fn oracle_is_specular_and_passive() {
        let env = one_class_env(Material { relative_permittivity: 4.0, conductivity: 0.01 });
        let model = OracleModel::new(&env, Humidity::Dry, 3.5e9);
        let geom = InteractionGeom {
            alpha: 0.7,
            psi: 0.3,
            gamma_offset: 0.3,
            class_id: 0,
            normal: Vec3::Z,
            point: Vec3::ZERO,
        };
        let (beta, gamma) = model.interact(&geom, Complex64::new(1.0, 0.0));
        assert_eq!(beta, 0.7);
        assert!(gamma.norm() <= 1.0);
        assert!(gamma.re < 0.0, "reflection carries a pi phase");
    }

    #[test]
    fn psi_extremes_select_single_coefficients() {
        let env = one_class_env(Material { relative_permittivity: 4.0, conductivity: 0.0 });
        let model = OracleModel::new(&env, Humidity::Dry, 3.5e9);
        let alpha = 0.5;
        let (gp, gpar) = fresnel_coefficients(model.material(0), alpha, 3.5e9);
        assert!((model.gamma_eff_magnitude(0, alpha, 0.0) - gpar.norm()).abs() < 1e-12);
        assert!(
            (model.gamma_eff_magnitude(0, alpha, std::f64::consts::FRAC_PI_2) - gp.norm()).abs()
                < 1e-12
        );
    }
}
