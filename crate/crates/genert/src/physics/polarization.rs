//! Polarization angle and the local polarization frame of an interaction.

use super::PhysicsError;
use crate::math::Vec3;

/// Orthonormal polarization frame at a reflection: the perpendicular unit
/// vector (normal to the plane of incidence) and the parallel unit vectors
/// for the incident and specularly reflected propagation directions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolarizationFrame {
    pub e_perp: Vec3,
    pub e_par_in: Vec3,
    pub e_par_out: Vec3,
}

/// Angle between the transmitter field direction and the normal of the plane
/// of incidence:
///
/// psi = arccos( (v x d) / ||v x d|| . e_field ), in [0, pi].
///
/// Fails with [`PhysicsError::NormalIncidenceDegenerate`] when the plane of
/// incidence is undefined; callers then apply the fixed psi = pi/2
/// convention ([`super::NORMAL_INCIDENCE_PSI`]).
pub fn polarization_angle(
    normal: Vec3,
    d_in: Vec3,
    e_field: Vec3,
) -> Result<(f64, PolarizationFrame), PhysicsError> {
    let cross = normal.cross(d_in);
    if cross.norm() <= 1e-9 {
        return Err(PhysicsError::NormalIncidenceDegenerate);
    }
    let e_perp = cross.normalized();
    let psi = e_perp.dot(e_field).clamp(-1.0, 1.0).acos();

    // Specular reflected direction defines the outgoing parallel axis.
    let v = if d_in.dot(normal) <= 0.0 { normal } else { -normal };
    let d_out = d_in - v * (2.0 * d_in.dot(v));
    let frame = PolarizationFrame {
        e_perp,
        e_par_in: e_perp.cross(d_in).normalized(),
        e_par_out: e_perp.cross(d_out).normalized(),
    };
    Ok((psi, frame))
}
