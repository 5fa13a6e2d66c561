//! Deterministic geometric ray tracing core: launching rays from a
//! transmitter, nearest ray-triangle intersection, specular-frame angle
//! handling, ray state updates, and the propagation loop that drives an
//! interaction model (physics oracle or neural predictor) over a scene.

mod intersect;
mod launch;
mod trace;

pub use intersect::{intersect_batch, intersect_nearest, TriSet, EPS_MIN};
pub use launch::launch_rays;
pub use trace::{
    trace_paths, InteractionModel, SpecularPerfectModel, TraceConfig, TraceLimits, TracedPath,
    TraceResult,
};

use std::fmt;

use num_complex::Complex64;

use crate::math::Vec3;

#[derive(Debug, Clone, PartialEq)]
pub enum GeomError {
    InvalidSpacing(f64),
    LengthMismatch { origins: usize, directions: usize },
    DegenerateTangent,
    InvalidAngle(f64),
    StateNotAlive,
}

impl fmt::Display for GeomError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeomError::InvalidSpacing(s) => {
                write!(f, "angular spacing {s} rad outside (0, pi/2]")
            }
            GeomError::LengthMismatch { origins, directions } => {
                write!(f, "batch length mismatch: {origins} origins vs {directions} directions")
            }
            GeomError::DegenerateTangent => {
                write!(f, "tangential direction undefined at normal incidence with beta > 0")
            }
            GeomError::InvalidAngle(b) => write!(f, "outgoing angle {b} rad outside [0, pi/2)"),
            GeomError::StateNotAlive => write!(f, "ray state is not alive"),
        }
    }
}

impl std::error::Error for GeomError {}

/// Transmitter configuration: position, antenna polarization and carrier.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TxConfig {
    pub position: Vec3,
    /// Antenna electric-field oscillation direction (unit vector).
    pub e_field_dir: Vec3,
    pub gain_dbi: f64,
    pub power_dbm: f64,
    pub frequency_hz: f64,
}

impl TxConfig {
    /// Isotropic 0 dBm / 0 dBi transmitter with vertical polarization at
    /// 3.5 GHz.
    pub fn new(position: Vec3) -> TxConfig {
        TxConfig {
            position,
            e_field_dir: Vec3::Z,
            gain_dbi: 0.0,
            power_dbm: 0.0,
            frequency_hz: 3.5e9,
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        if !self.e_field_dir.is_unit() {
            return Err(format!("e_field_dir norm {} is not 1", self.e_field_dir.norm()));
        }
        if !(self.frequency_hz > 0.0) {
            return Err(format!("frequency {} must be positive", self.frequency_hz));
        }
        Ok(())
    }

    pub fn wavelength(&self) -> f64 {
        crate::math::SPEED_OF_LIGHT / self.frequency_hz
    }
}

/// Reception-sphere sizing for a receiver.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CaptureRadius {
    /// Radius grows with unfolded path length and launch density:
    /// r = (unfolded length at closest approach) * spacing / sqrt(3).
    Adaptive,
    /// Fixed radius in meters.
    Fixed(f64),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RxConfig {
    pub position: Vec3,
    pub gain_dbi: f64,
    pub capture_radius_mode: CaptureRadius,
}

impl RxConfig {
    pub fn new(position: Vec3) -> RxConfig {
        RxConfig { position, gain_dbi: 0.0, capture_radius_mode: CaptureRadius::Adaptive }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RayStatus {
    Alive,
    Received,
    Terminated,
}

/// Per-ray propagation record: interaction points so far, current direction,
/// cumulative interaction coefficient and unfolded distance.
#[derive(Clone, Debug, PartialEq)]
pub struct RayState {
    pub points: Vec<Vec3>,
    pub direction: Vec3,
    pub cum_gamma: Complex64,
    pub cum_distance: f64,
    pub status: RayStatus,
}

impl RayState {
    /// Fresh state: no interactions, cumulative coefficient 1.
    pub fn new(direction: Vec3) -> RayState {
        RayState {
            points: Vec::new(),
            direction,
            cum_gamma: Complex64::new(1.0, 0.0),
            cum_distance: 0.0,
            status: RayStatus::Alive,
        }
    }

    /// Interaction count; always equals the number of stored points.
    pub fn k(&self) -> usize {
        self.points.len()
    }
}

/// One nearest-intersection result.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Hit {
    pub point: Vec3,
    pub surface_id: u32,
    pub distance: f64,
    pub barycentric: (f64, f64),
}

/// Relative geometric features of one ray-surface interaction: everything
/// the interaction model is allowed to see.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InteractionGeom {
    /// Incident angle from the surface normal, [0, pi/2).
    pub alpha: f64,
    /// Polarization angle of the transmitter field against the plane of
    /// incidence, [0, pi].
    pub psi: f64,
    /// Same angle computed against a globally vertical reference field.
    pub gamma_offset: f64,
    pub class_id: u32,
    /// Surface normal oriented toward the incoming side (d . normal < 0).
    pub normal: Vec3,
    pub point: Vec3,
}

/// Outgoing direction from an interaction: cos(beta) * normal plus
/// sin(beta) times the normalized tangential component of the incident
/// direction.
///
/// `normal` may face either side; it is re-oriented toward the incident ray.
pub fn reflect_direction(d_in: Vec3, normal: Vec3, beta: f64) -> Result<Vec3, GeomError> {
    if !(0.0..std::f64::consts::FRAC_PI_2).contains(&beta) {
        return Err(GeomError::InvalidAngle(beta));
    }
    let v = if d_in.dot(normal) <= 0.0 { normal } else { -normal };
    let tangential = d_in - v * d_in.dot(v);
    match tangential.try_normalized() {
        Some(t) => Ok(v * beta.cos() + t * beta.sin()),
        None if beta == 0.0 => Ok(v),
        None => Err(GeomError::DegenerateTangent),
    }
}

/// Advances a ray state through one interaction.
pub fn update_state(
    state: &RayState,
    hit: &Hit,
    gamma_k: Complex64,
    d_out: Vec3,
) -> Result<RayState, GeomError> {
    if state.status != RayStatus::Alive {
        return Err(GeomError::StateNotAlive);
    }
    let mut points = state.points.clone();
    points.push(hit.point);
    Ok(RayState {
        points,
        direction: d_out,
        cum_gamma: gamma_k * state.cum_gamma,
        cum_distance: state.cum_distance + hit.distance,
        status: RayStatus::Alive,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;

    #[test]
    fn reflect_matches_mirror_example() {
        let d = Vec3::new(1.0, 0.0, -1.0).normalized();
        let out = reflect_direction(d, Vec3::Z, std::f64::consts::FRAC_PI_4).unwrap();
        let expected = Vec3::new(1.0, 0.0, 1.0).normalized();
        assert!((out - expected).norm() < 1e-12);
    }

    #[test]
    fn reflect_beta_zero_returns_normal() {
        let d = Vec3::new(0.3, -0.2, -0.9).normalized();
        let out = reflect_direction(d, Vec3::Z, 0.0).unwrap();
        assert!((out - Vec3::Z).norm() < 1e-12);
    }

    #[test]
    fn reflect_output_is_unit_for_random_inputs() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10_000 {
            let d = Vec3::new(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..-0.01),
            )
            .normalized();
            let beta = rng.gen_range(0.0..std::f64::consts::FRAC_PI_2 * 0.999);
            let out = reflect_direction(d, Vec3::Z, beta).unwrap();
            assert!((out.norm() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn reflect_specular_equals_householder_formula() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(12);
        for _ in 0..1000 {
            let n = Vec3::new(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            )
            .normalized();
            let mut d = Vec3::new(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            )
            .normalized();
            if d.dot(n) > 0.0 {
                d = -d;
            }
            if d.dot(n).abs() > 0.999 {
                continue; // near-normal incidence exercised elsewhere
            }
            let alpha = d.dot(n).abs().acos();
            let specular = reflect_direction(d, n, alpha).unwrap();
            let mirror = d - n * (2.0 * d.dot(n));
            assert!((specular - mirror).norm() < 1e-9);
        }
    }

    #[test]
    fn reflect_degenerate_tangent_is_an_error() {
        let err = reflect_direction(-Vec3::Z, Vec3::Z, 0.3).unwrap_err();
        assert_eq!(err, GeomError::DegenerateTangent);
    }

    #[test]
    fn update_state_accumulates_product_and_distance() {
        let fresh = RayState::new(Vec3::Z);
        assert_eq!(fresh.k(), 0);
        assert_eq!(fresh.cum_gamma, Complex64::new(1.0, 0.0));

        let h1 = Hit {
            point: Vec3::new(0.0, 0.0, 3.0),
            surface_id: 0,
            distance: 3.0,
            barycentric: (0.2, 0.2),
        };
        let s1 = update_state(&fresh, &h1, Complex64::new(0.5, 0.0), Vec3::new(1.0, 0.0, 0.0))
            .unwrap();
        assert_eq!(s1.k(), 1);
        assert_eq!(s1.cum_gamma, Complex64::new(0.5, 0.0));
        assert_eq!(s1.cum_distance, 3.0);

        let h2 = Hit {
            point: Vec3::new(4.0, 0.0, 3.0),
            surface_id: 1,
            distance: 4.0,
            barycentric: (0.1, 0.1),
        };
        let s2 = update_state(&s1, &h2, Complex64::new(0.4, 0.0), Vec3::Z).unwrap();
        assert_eq!(s2.k(), 2);
        assert!((s2.cum_gamma.re - 0.2).abs() < 1e-15);
        assert_eq!(s2.cum_distance, 7.0);
        assert_eq!(s2.points, vec![h1.point, h2.point]);
    }

    #[test]
    fn update_state_rejects_dead_rays() {
        let mut s = RayState::new(Vec3::Z);
        s.status = RayStatus::Terminated;
        let h = Hit { point: Vec3::ZERO, surface_id: 0, distance: 1.0, barycentric: (0.0, 0.0) };
        assert_eq!(
            update_state(&s, &h, Complex64::new(1.0, 0.0), Vec3::Z).unwrap_err(),
            GeomError::StateNotAlive
        );
    }
}
