//! Classical electromagnetics oracle: polarization geometry, Fresnel
//! reflection coefficients, reflected-field composition, free-space path
//! attenuation and channel-impulse-response rendering.
//!
//! These routines are the ground-truth generator for training data, the
//! specular interaction model for the tracer, and the reference the test
//! suites check everything else against.

mod attenuation;
mod cir;
mod fresnel;
mod oracle;
mod polarization;

pub use attenuation::{attenuation_from_product, path_attenuation};
pub use cir::{render_cir, Cir, Mpc};
pub use fresnel::{fresnel_coefficients, reflect_field, ReflectedField};
pub use oracle::OracleModel;
pub use polarization::{polarization_angle, PolarizationFrame};

use std::fmt;

/// Convention applied where the plane of incidence is undefined (propagation
/// parallel to the normal): a pure perpendicular decomposition. Harmless
/// because the two Fresnel coefficients share a magnitude at normal
/// incidence.
pub const NORMAL_INCIDENCE_PSI: f64 = std::f64::consts::FRAC_PI_2;

#[derive(Debug, Clone, PartialEq)]
pub enum PhysicsError {
    NormalIncidenceDegenerate,
    NonPositiveDistance(f64),
}

impl fmt::Display for PhysicsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PhysicsError::NormalIncidenceDegenerate => {
                write!(f, "plane of incidence undefined at normal incidence")
            }
            PhysicsError::NonPositiveDistance(d) => {
                write!(f, "path distance {d} must be positive")
            }
        }
    }
}

impl std::error::Error for PhysicsError {}
