//! Nearest ray-triangle intersection, scalar and batched.
//!
//! Both entry points run the same Möller-Trumbore kernel over the same
//! precomputed triangle arrays, so batched results are bitwise identical to
//! the scalar loop. Triangles are two-sided; the self-intersection guard
//! rejects hits closer than [`EPS_MIN`] and the surface the ray last bounced
//! off.

use rayon::prelude::*;

use super::{GeomError, Hit};
use crate::math::Vec3;
use crate::scene::Environment;

/// Self-intersection guard: hits closer than this are ignored, meters.
pub const EPS_MIN: f64 = 1e-6;

/// Barycentric tolerance band for edge acceptance.
const BARY_EPS: f64 = 1e-9;

/// Precomputed triangle data in contiguous arrays, shared by every ray of a
/// batch or trace.
#[derive(Clone, Debug)]
pub struct TriSet {
    v0: Vec<Vec3>,
    e1: Vec<Vec3>,
    e2: Vec<Vec3>,
    surface_id: Vec<u32>,
}

impl TriSet {
    pub fn new(env: &Environment) -> TriSet {
        let n = env.surfaces().len();
        let mut v0 = Vec::with_capacity(n);
        let mut e1 = Vec::with_capacity(n);
        let mut e2 = Vec::with_capacity(n);
        let mut surface_id = Vec::with_capacity(n);
        for s in env.surfaces() {
            v0.push(s.vertices[0]);
            e1.push(s.edge1());
            e2.push(s.edge2());
            surface_id.push(s.id);
        }
        TriSet { v0, e1, e2, surface_id }
    }

    pub fn len(&self) -> usize {
        self.v0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.v0.is_empty()
    }

    /// Nearest hit along `direction` from `origin`, skipping
    /// `exclude_surface`. Ties at identical distance resolve to the triangle
    /// that appears first in the scene, which keeps results deterministic.
    pub fn nearest(&self, origin: Vec3, direction: Vec3, exclude_surface: Option<u32>) -> Option<Hit> {
        let mut best: Option<Hit> = None;
        for i in 0..self.len() {
            if Some(self.surface_id[i]) == exclude_surface {
                continue;
            }
            let e1 = self.e1[i];
            let e2 = self.e2[i];
            let pvec = direction.cross(e2);
            let det = e1.dot(pvec);
            if det.abs() < 1e-300 {
                continue; // ray parallel to the triangle plane
            }
            let inv_det = 1.0 / det;
            let tvec = origin - self.v0[i];
            let u = tvec.dot(pvec) * inv_det;
            if !(-BARY_EPS..=1.0 + BARY_EPS).contains(&u) {
                continue;
            }
            let qvec = tvec.cross(e1);
            let v = direction.dot(qvec) * inv_det;
            if v < -BARY_EPS || u + v > 1.0 + BARY_EPS {
                continue;
            }
            let t = e2.dot(qvec) * inv_det;
            if t <= EPS_MIN {
                continue;
            }
            if best.map_or(true, |b| t < b.distance) {
                best = Some(Hit {
                    point: origin + direction * t,
                    surface_id: self.surface_id[i],
                    distance: t,
                    barycentric: (u, v),
                });
            }
        }
        best
    }
}

/// Nearest intersection of a single ray with the environment.
pub fn intersect_nearest(
    origin: Vec3,
    direction: Vec3,
    env: &Environment,
    exclude_surface: Option<u32>,
) -> Option<Hit> {
    TriSet::new(env).nearest(origin, direction, exclude_surface)
}

/// Element-wise nearest intersections for contiguous ray arrays. Results are
/// identical to calling [`intersect_nearest`] per element.
pub fn intersect_batch(
    origins: &[Vec3],
    directions: &[Vec3],
    env: &Environment,
) -> Result<Vec<Option<Hit>>, GeomError> {
    if origins.len() != directions.len() {
        return Err(GeomError::LengthMismatch {
            origins: origins.len(),
            directions: directions.len(),
        });
    }
    let tris = TriSet::new(env);
    let mut out = vec![None; origins.len()];
    out.par_iter_mut().enumerate().for_each(|(i, slot)| {
        *slot = tris.nearest(origins[i], directions[i], None);
    });
    Ok(out)
}
