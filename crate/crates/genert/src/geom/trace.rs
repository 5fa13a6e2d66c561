//! Ray propagation: intersect -> interaction model -> state update loops with
//! reception-sphere capture, per-receiver de-duplication and post-capture
//! path refinement.
//!
//! The tracer is generic over the interaction model, so the same loop drives
//! both the Fresnel physics oracle and the neural predictor.

use num_complex::Complex64;
use rayon::prelude::*;

use super::intersect::{TriSet, EPS_MIN};
use super::launch::{lattice_direction, ray_count};
use super::{GeomError, InteractionGeom, RayState, RayStatus, RxConfig, TxConfig};
use crate::math::Vec3;
use crate::physics::{polarization_angle, NORMAL_INCIDENCE_PSI};
use crate::scene::{Environment, Surface};

/// Decides the outgoing angle and interaction coefficient of one
/// ray-surface interaction from relative geometric features only.
pub trait InteractionModel: Sync {
    /// Returns `(beta, gamma)`: the outgoing angle from the oriented normal
    /// and the complex interaction coefficient.
    fn interact(&self, geom: &InteractionGeom, cum_gamma: Complex64) -> (f64, Complex64);
}

/// Lossless specular mirror; useful for pure geometry tests.
pub struct SpecularPerfectModel;

impl InteractionModel for SpecularPerfectModel {
    fn interact(&self, geom: &InteractionGeom, _cum_gamma: Complex64) -> (f64, Complex64) {
        (geom.alpha, Complex64::new(1.0, 0.0))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceLimits {
    pub max_interactions: usize,
    /// Relative interaction loss threshold: rays stop once
    /// 20 log10 |cum_gamma| falls below this, dB.
    pub power_floor_db: f64,
}

impl Default for TraceLimits {
    fn default() -> Self {
        TraceLimits { max_interactions: 3, power_floor_db: -40.0 }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct TraceConfig {
    pub angular_spacing: f64,
    pub limits: TraceLimits,
    /// Report zero-interaction (line-of-sight) paths.
    pub include_los: bool,
    /// Newton-refine captured paths so they pass exactly through the
    /// receiver. Disable to keep raw captured geometry.
    pub refine: bool,
    /// Trace rays across the rayon pool. Results are identical either way;
    /// the sequential mode exists for reproducibility checks.
    pub parallel: bool,
}

impl Default for TraceConfig {
    fn default() -> Self {
        TraceConfig {
            angular_spacing: 0.4_f64.to_radians(),
            limits: TraceLimits::default(),
            include_los: true,
            refine: true,
            parallel: true,
        }
    }
}

/// One received propagation path.
#[derive(Clone, Debug)]
pub struct TracedPath {
    pub ray_index: usize,
    /// Final ray state: `points` holds the interaction coordinates and
    /// `cum_distance` the full unfolded length ending at the receiver.
    pub state: RayState,
    pub interactions: Vec<InteractionGeom>,
    pub surface_ids: Vec<u32>,
    /// Residual perpendicular miss distance at the receiver, meters.
    pub capture_miss_m: f64,
}

impl TracedPath {
    pub fn k(&self) -> usize {
        self.surface_ids.len()
    }
}

#[derive(Clone, Debug, Default)]
pub struct TraceResult {
    /// Received paths per receiver, ordered by (ray index, interaction
    /// count).
    pub per_rx: Vec<Vec<TracedPath>>,
}

/// Relative geometric features of an interaction; the normal is oriented
/// toward the incident side before any angle is computed.
pub(crate) fn interaction_geom(surface: &Surface, point: Vec3, d_in: Vec3, e_field: Vec3) -> InteractionGeom {
    let v = if d_in.dot(surface.normal) <= 0.0 { surface.normal } else { -surface.normal };
    let alpha = d_in.dot(v).abs().clamp(0.0, 1.0).acos();
    let psi = polarization_angle(v, d_in, e_field)
        .map(|(p, _)| p)
        .unwrap_or(NORMAL_INCIDENCE_PSI);
    let gamma_offset = polarization_angle(v, d_in, Vec3::Z)
        .map(|(p, _)| p)
        .unwrap_or(NORMAL_INCIDENCE_PSI);
    InteractionGeom { alpha, psi, gamma_offset, class_id: surface.class_id, normal: v, point }
}

/// A reception-sphere capture before de-duplication.
struct Candidate {
    rx_index: usize,
    ray_index: usize,
    points: Vec<Vec3>,
    interactions: Vec<InteractionGeom>,
    surface_ids: Vec<u32>,
    cum_gamma: Complex64,
    /// Unfolded length from Tx to the last interaction point.
    len_to_last_point: f64,
    first_direction: Vec3,
    miss: f64,
}

struct RayWorker<'a> {
    env: &'a Environment,
    tris: &'a TriSet,
    surface_index: &'a std::collections::HashMap<u32, usize>,
    tx: &'a TxConfig,
    rxs: &'a [RxConfig],
    model: &'a dyn InteractionModel,
    cfg: &'a TraceConfig,
}

impl<'a> RayWorker<'a> {
    fn surface(&self, id: u32) -> &'a Surface {
        &self.env.surfaces()[self.surface_index[&id]]
    }

    /// Propagates one launched ray and collects every reception capture.
    fn run(&self, ray_index: usize, d0: Vec3, out: &mut Vec<Candidate>) {
        let mut state = RayState::new(d0);
        let mut origin = self.tx.position;
        let mut exclude: Option<u32> = None;
        let mut interactions: Vec<InteractionGeom> = Vec::new();
        let mut surface_ids: Vec<u32> = Vec::new();
        let mut first_direction = d0;

        loop {
            let hit = self.tris.nearest(origin, state.direction, exclude);
            let seg_len = hit.as_ref().map_or(f64::INFINITY, |h| h.distance);

            for (rx_index, rx) in self.rxs.iter().enumerate() {
                if state.k() == 0 && !self.cfg.include_los {
                    continue;
                }
                let w = rx.position - origin;
                let t_ca = w.dot(state.direction).clamp(0.0, seg_len);
                if !t_ca.is_finite() {
                    continue;
                }
                let closest = origin + state.direction * t_ca;
                let miss = (rx.position - closest).norm();
                let radius = match rx.capture_radius_mode {
                    super::CaptureRadius::Fixed(r) => r,
                    super::CaptureRadius::Adaptive => {
                        (state.cum_distance + t_ca) * self.cfg.angular_spacing / 3.0_f64.sqrt()
                    }
                };
                if miss <= radius {
                    out.push(Candidate {
                        rx_index,
                        ray_index,
                        points: state.points.clone(),
                        interactions: interactions.clone(),
                        surface_ids: surface_ids.clone(),
                        cum_gamma: state.cum_gamma,
                        len_to_last_point: state.cum_distance,
                        first_direction,
                        miss,
                    });
                }
            }

            let Some(h) = hit else {
                return; // scene exit
            };
            if state.k() >= self.cfg.limits.max_interactions {
                return;
            }
            let surface = self.surface(h.surface_id);
            let geom = interaction_geom(surface, h.point, state.direction, self.tx.e_field_dir);
            let (beta, gamma) = self.model.interact(&geom, state.cum_gamma);
            let beta = clamp_beta(beta);
            let Ok(d_out) = super::reflect_direction(state.direction, geom.normal, beta) else {
                return; // normal incidence with nonzero outgoing angle
            };
            state = match super::update_state(&state, &h, gamma, d_out) {
                Ok(s) => s,
                Err(_) => return,
            };
            interactions.push(geom);
            surface_ids.push(h.surface_id);
            if state.k() == 1 {
                first_direction = d0;
            }
            origin = h.point;
            exclude = Some(h.surface_id);
            if 20.0 * state.cum_gamma.norm().log10() < self.cfg.limits.power_floor_db {
                return;
            }
        }
    }
}

fn clamp_beta(beta: f64) -> f64 {
    if !beta.is_finite() {
        return 0.0;
    }
    beta.clamp(0.0, std::f64::consts::FRAC_PI_2 - 1e-12)
}

/// Traces all launched rays through the environment and returns the received
/// paths for every receiver.
pub fn trace_paths(
    env: &Environment,
    tx: &TxConfig,
    rxs: &[RxConfig],
    model: &dyn InteractionModel,
    cfg: &TraceConfig,
) -> Result<TraceResult, GeomError> {
    if !(cfg.angular_spacing > 0.0 && cfg.angular_spacing <= std::f64::consts::FRAC_PI_2) {
        return Err(GeomError::InvalidSpacing(cfg.angular_spacing));
    }
    let tris = TriSet::new(env);
    let surface_index: std::collections::HashMap<u32, usize> =
        env.surfaces().iter().enumerate().map(|(i, s)| (s.id, i)).collect();
    let worker = RayWorker { env, tris: &tris, surface_index: &surface_index, tx, rxs, model, cfg };

    let n = ray_count(cfg.angular_spacing);
    let candidates: Vec<Candidate> = if cfg.parallel {
        // Chunked map keeps per-ray allocations local; concatenation in chunk
        // order keeps the result deterministic under any thread count.
        let chunk = 4096;
        let starts: Vec<usize> = (0..n).step_by(chunk).collect();
        let mut per_chunk: Vec<Vec<Candidate>> = starts
            .par_iter()
            .map(|&start| {
                let mut local = Vec::new();
                for i in start..(start + chunk).min(n) {
                    worker.run(i, lattice_direction(i, n), &mut local);
                }
                local
            })
            .collect();
        let mut all = Vec::new();
        for c in per_chunk.iter_mut() {
            all.append(c);
        }
        all
    } else {
        let mut all = Vec::new();
        for i in 0..n {
            worker.run(i, lattice_direction(i, n), &mut all);
        }
        all
    };

    // De-duplicate per receiver: among captures with the same interaction
    // surface sequence keep the smallest miss distance (ties go to the lower
    // ray index since candidates arrive in ray order).
    let mut kept: Vec<std::collections::HashMap<Vec<u32>, Candidate>> =
        (0..rxs.len()).map(|_| std::collections::HashMap::new()).collect();
    for cand in candidates {
        let bucket = &mut kept[cand.rx_index];
        match bucket.get(&cand.surface_ids) {
            Some(existing) if existing.miss <= cand.miss => {}
            _ => {
                bucket.insert(cand.surface_ids.clone(), cand);
            }
        }
    }

    let mut per_rx: Vec<Vec<TracedPath>> = Vec::with_capacity(rxs.len());
    for (rx_index, bucket) in kept.into_iter().enumerate() {
        let rx = &rxs[rx_index];
        let mut paths: Vec<TracedPath> = bucket
            .into_values()
            .filter_map(|cand| finalize_candidate(&worker, rx, cand))
            .collect();
        paths.sort_by_key(|p| (p.ray_index, p.k()));
        per_rx.push(paths);
    }
    Ok(TraceResult { per_rx })
}

/// Turns a capture into a final path: line-of-sight paths become the exact
/// direct segment (dropped if occluded), reflected paths are Newton-refined
/// onto the receiver when refinement is enabled.
fn finalize_candidate(worker: &RayWorker<'_>, rx: &RxConfig, cand: Candidate) -> Option<TracedPath> {
    let tx_pos = worker.tx.position;
    if cand.surface_ids.is_empty() {
        // LOS: exact direct segment, kept only when unobstructed.
        let to_rx = rx.position - tx_pos;
        let dist = to_rx.norm();
        let dir = to_rx.try_normalized()?;
        if let Some(h) = worker.tris.nearest(tx_pos, dir, None) {
            if h.distance < dist - EPS_MIN {
                return None;
            }
        }
        return Some(TracedPath {
            ray_index: cand.ray_index,
            state: RayState {
                points: Vec::new(),
                direction: dir,
                cum_gamma: Complex64::new(1.0, 0.0),
                cum_distance: dist,
                status: RayStatus::Received,
            },
            interactions: Vec::new(),
            surface_ids: Vec::new(),
            capture_miss_m: 0.0,
        });
    }

    if worker.cfg.refine {
        if let Some(path) = refine_path(worker, rx, &cand) {
            return Some(path);
        }
    }

    // Unrefined fallback: keep the traced interaction points, replace the
    // terminal point by the exact receiver position.
    let last = *cand.points.last().expect("non-LOS capture has points");
    let final_leg = rx.position - last;
    let final_dir = final_leg.try_normalized()?;
    Some(TracedPath {
        ray_index: cand.ray_index,
        state: RayState {
            points: cand.points.clone(),
            direction: final_dir,
            cum_gamma: cand.cum_gamma,
            cum_distance: cand.len_to_last_point + final_leg.norm(),
            status: RayStatus::Received,
        },
        interactions: cand.interactions.clone(),
        surface_ids: cand.surface_ids.clone(),
        capture_miss_m: cand.miss,
    })
}

/// Result of walking a fixed surface sequence from the transmitter.
struct Walk {
    points: Vec<Vec3>,
    interactions: Vec<InteractionGeom>,
    gammas: Vec<Complex64>,
    len_to_last: f64,
    last_dir: Vec3,
}

/// Deterministically re-traces a fixed surface-id sequence for a given
/// launch direction, intersecting each surface's plane in order.
fn walk_sequence(worker: &RayWorker<'_>, d0: Vec3, sequence: &[u32]) -> Option<Walk> {
    let mut p = worker.tx.position;
    let mut d = d0;
    let mut points = Vec::with_capacity(sequence.len());
    let mut interactions = Vec::with_capacity(sequence.len());
    let mut gammas = Vec::with_capacity(sequence.len());
    let mut len = 0.0;
    let mut cum_gamma = Complex64::new(1.0, 0.0);
    for &sid in sequence {
        let surface = worker.surface(sid);
        let denom = d.dot(surface.normal);
        if denom.abs() < 1e-14 {
            return None;
        }
        let t = (surface.vertices[0] - p).dot(surface.normal) / denom;
        if t <= EPS_MIN {
            return None;
        }
        let hit_point = p + d * t;
        let geom = interaction_geom(surface, hit_point, d, worker.tx.e_field_dir);
        let (beta, gamma) = worker.model.interact(&geom, cum_gamma);
        let beta = clamp_beta(beta);
        let d_out = super::reflect_direction(d, geom.normal, beta).ok()?;
        len += t;
        p = hit_point;
        d = d_out;
        cum_gamma *= gamma;
        points.push(hit_point);
        interactions.push(geom);
        gammas.push(gamma);
    }
    Some(Walk { points, interactions, gammas, len_to_last: len, last_dir: d })
}

/// Newton-iterates the launch direction until the walked path passes through
/// the receiver, then validates the refined geometry against the full scene.
fn refine_path(worker: &RayWorker<'_>, rx: &RxConfig, cand: &Candidate) -> Option<TracedPath> {
    let d0 = cand.first_direction;
    let t1 = d0.any_orthonormal();
    let t2 = d0.cross(t1).normalized();

    // Miss vector measured in a fixed basis orthogonal to the captured
    // final-segment direction.
    let base_walk = walk_sequence(worker, d0, &cand.surface_ids)?;
    let bdir = base_walk.last_dir;
    let b1 = bdir.any_orthonormal();
    let b2 = bdir.cross(b1).normalized();

    let eval = |u: f64, w: f64| -> Option<(Walk, [f64; 2], f64)> {
        let d = (d0 + t1 * u + t2 * w).try_normalized()?;
        let walk = walk_sequence(worker, d, &cand.surface_ids)?;
        let last = *walk.points.last()?;
        let e = rx.position - last;
        let along = e.dot(walk.last_dir);
        if along <= 0.0 {
            return None;
        }
        let m = e - walk.last_dir * along;
        Some((walk, [m.dot(b1), m.dot(b2)], m.norm()))
    };

    let mut u = 0.0;
    let mut w = 0.0;
    let (mut walk, mut f, mut miss) = eval(u, w)?;
    let tol = 1e-10 * (1.0 + walk.len_to_last);
    let h = 1e-9;
    for _ in 0..30 {
        if miss <= tol {
            break;
        }
        let (_, fu, _) = eval(u + h, w)?;
        let (_, fw, _) = eval(u, w + h)?;
        let j = [
            [(fu[0] - f[0]) / h, (fw[0] - f[0]) / h],
            [(fu[1] - f[1]) / h, (fw[1] - f[1]) / h],
        ];
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det.abs() < 1e-30 {
            return None;
        }
        let du = (-f[0] * j[1][1] + f[1] * j[0][1]) / det;
        let dw = (-f[1] * j[0][0] + f[0] * j[1][0]) / det;
        // Damped update: backtrack while the miss grows.
        let mut scale = 1.0;
        let mut accepted = false;
        for _ in 0..8 {
            if let Some((nw, nf, nm)) = eval(u + scale * du, w + scale * dw) {
                if nm < miss {
                    u += scale * du;
                    w += scale * dw;
                    walk = nw;
                    f = nf;
                    miss = nm;
                    accepted = true;
                    break;
                }
            }
            scale *= 0.5;
        }
        if !accepted {
            return None;
        }
    }
    if miss > 1e-8 * (1.0 + walk.len_to_last) {
        return None;
    }

    // Validate against the full scene: every refined leg must reach its
    // surface unobstructed, stay on the triangle, and the final leg must
    // reach the receiver.
    let refined_d0 = (d0 + t1 * u + t2 * w).normalized();
    let mut p = worker.tx.position;
    let mut d = refined_d0;
    let mut exclude = None;
    for (i, &sid) in cand.surface_ids.iter().enumerate() {
        let h = worker.tris.nearest(p, d, exclude)?;
        if h.surface_id != sid {
            return None;
        }
        if (h.point - walk.points[i]).norm() > 1e-6 {
            return None;
        }
        let surface = worker.surface(sid);
        let geom = interaction_geom(surface, h.point, d, worker.tx.e_field_dir);
        let (beta, _) = worker.model.interact(&geom, walk.gammas[..i].iter().product());
        d = super::reflect_direction(d, geom.normal, clamp_beta(beta)).ok()?;
        p = h.point;
        exclude = Some(sid);
    }
    let last = *walk.points.last()?;
    let final_leg = rx.position - last;
    let final_len = final_leg.norm();
    let final_dir = final_leg.try_normalized()?;
    if let Some(h) = worker.tris.nearest(last, final_dir, exclude) {
        if h.distance < final_len - EPS_MIN {
            return None;
        }
    }

    let cum_gamma: Complex64 = walk.gammas.iter().product();
    Some(TracedPath {
        ray_index: cand.ray_index,
        state: RayState {
            points: walk.points.clone(),
            direction: final_dir,
            cum_gamma,
            cum_distance: walk.len_to_last + final_len,
            status: RayStatus::Received,
        },
        interactions: walk.interactions,
        surface_ids: cand.surface_ids.clone(),
        capture_miss_m: miss,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::{Aabb, Material, SemanticClass};
    use std::collections::HashMap;

    fn ground_env(half: f64) -> Environment {
        let v = [
            Vec3::new(-half, -half, 0.0),
            Vec3::new(half, -half, 0.0),
            Vec3::new(half, half, 0.0),
            Vec3::new(-half, half, 0.0),
        ];
        let surfaces = vec![
            Surface { id: 0, class_id: 0, vertices: [v[0], v[1], v[2]], normal: Vec3::Z },
            Surface { id: 1, class_id: 0, vertices: [v[0], v[2], v[3]], normal: Vec3::Z },
        ];
        let classes = vec![SemanticClass { id: 0, name: "ground".into(), one_hot_index: 0 }];
        let mut materials = HashMap::new();
        materials.insert(
            (0, crate::scene::Humidity::Dry),
            Material { relative_permittivity: 3.0, conductivity: 0.0001 },
        );
        Environment::from_parts(
            surfaces,
            classes,
            materials,
            Aabb { min: Vec3::new(-half, -half, -1.0), max: Vec3::new(half, half, 50.0) },
        )
    }

    fn empty_env() -> Environment {
        Environment::from_parts(
            Vec::new(),
            Vec::new(),
            HashMap::new(),
            Aabb { min: Vec3::new(-100.0, -100.0, -100.0), max: Vec3::new(100.0, 100.0, 100.0) },
        )
    }

    #[test]
    fn los_path_in_empty_environment() {
        let env = empty_env();
        let tx = TxConfig::new(Vec3::ZERO);
        let rx = RxConfig::new(Vec3::new(10.0, 0.0, 0.0));
        let cfg = TraceConfig { angular_spacing: 0.05, ..TraceConfig::default() };
        let result = trace_paths(&env, &tx, &[rx], &SpecularPerfectModel, &cfg).unwrap();
        assert_eq!(result.per_rx.len(), 1);
        let paths = &result.per_rx[0];
        assert_eq!(paths.len(), 1, "expected exactly one LOS path, got {}", paths.len());
        let p = &paths[0];
        assert_eq!(p.k(), 0);
        assert!((p.state.cum_distance - 10.0).abs() < 1e-12);
        assert_eq!(p.state.status, RayStatus::Received);
    }

    #[test]
    fn single_reflection_matches_image_method() {
        let env = ground_env(50.0);
        let tx = TxConfig::new(Vec3::new(0.0, 0.0, 1.0));
        let rx = RxConfig::new(Vec3::new(2.0, 0.0, 1.0));
        let cfg = TraceConfig { angular_spacing: 0.02, ..TraceConfig::default() };
        let result = trace_paths(&env, &tx, &[rx], &SpecularPerfectModel, &cfg).unwrap();
        let paths = &result.per_rx[0];
        let refl: Vec<&TracedPath> = paths.iter().filter(|p| p.k() == 1).collect();
        assert_eq!(refl.len(), 1, "expected one single-reflection path");
        let p = refl[0];
        assert!((p.state.points[0] - Vec3::new(1.0, 0.0, 0.0)).norm() < 1e-6);
        assert!((p.state.cum_distance - 2.0 * 2.0_f64.sqrt()).abs() < 1e-6);
        // LOS also present.
        assert!(paths.iter().any(|p| p.k() == 0));
    }

    #[test]
    fn max_interactions_limit_is_respected() {
        // Mirror box: two parallel walls bouncing rays back and forth.
        let wall = |x: f64, id: u32| {
            let v = [
                Vec3::new(x, -20.0, -20.0),
                Vec3::new(x, 20.0, -20.0),
                Vec3::new(x, 20.0, 20.0),
                Vec3::new(x, -20.0, 20.0),
            ];
            vec![
                Surface {
                    id,
                    class_id: 0,
                    vertices: [v[0], v[1], v[2]],
                    normal: Vec3::new(1.0, 0.0, 0.0),
                },
                Surface {
                    id: id + 1,
                    class_id: 0,
                    vertices: [v[0], v[2], v[3]],
                    normal: Vec3::new(1.0, 0.0, 0.0),
                },
            ]
        };
        let mut surfaces = wall(-5.0, 0);
        surfaces.extend(wall(5.0, 2));
        let classes = vec![SemanticClass { id: 0, name: "wall".into(), one_hot_index: 0 }];
        let mut materials = HashMap::new();
        materials.insert(
            (0, crate::scene::Humidity::Dry),
            Material { relative_permittivity: 4.0, conductivity: 0.0 },
        );
        let env = Environment::from_parts(
            surfaces,
            classes,
            materials,
            Aabb { min: Vec3::new(-5.0, -20.0, -20.0), max: Vec3::new(5.0, 20.0, 20.0) },
        );
        let tx = TxConfig::new(Vec3::new(0.0, 0.0, 0.0));
        let rx = RxConfig::new(Vec3::new(1.0, 3.0, 0.0));
        let cfg = TraceConfig {
            angular_spacing: 0.05,
            limits: TraceLimits { max_interactions: 3, power_floor_db: -200.0 },
            ..TraceConfig::default()
        };
        let result = trace_paths(&env, &tx, &[rx], &SpecularPerfectModel, &cfg).unwrap();
        assert!(!result.per_rx[0].is_empty());
        assert!(result.per_rx[0].iter().all(|p| p.k() <= 3));
    }

    #[test]
    fn sequential_and_parallel_traces_agree() {
        let env = ground_env(50.0);
        let tx = TxConfig::new(Vec3::new(0.0, 0.0, 1.5));
        let rxs = [
            RxConfig::new(Vec3::new(3.0, 1.0, 1.0)),
            RxConfig::new(Vec3::new(-4.0, 2.0, 2.0)),
        ];
        let mut cfg = TraceConfig { angular_spacing: 0.03, ..TraceConfig::default() };
        let par = trace_paths(&env, &tx, &rxs, &SpecularPerfectModel, &cfg).unwrap();
        cfg.parallel = false;
        let seq = trace_paths(&env, &tx, &rxs, &SpecularPerfectModel, &cfg).unwrap();
        assert_eq!(par.per_rx.len(), seq.per_rx.len());
        for (a, b) in par.per_rx.iter().zip(&seq.per_rx) {
            assert_eq!(a.len(), b.len());
            for (x, y) in a.iter().zip(b) {
                assert_eq!(x.ray_index, y.ray_index);
                assert_eq!(x.surface_ids, y.surface_ids);
                assert_eq!(x.state.cum_distance.to_bits(), y.state.cum_distance.to_bits());
            }
        }
    }

    #[test]
    fn energy_monotone_along_rays() {
        // With |gamma| <= 1 per interaction the cumulative magnitude cannot
        // grow; verified via a lossy model on the mirror scene.
        struct Lossy;
        impl InteractionModel for Lossy {
            fn interact(&self, geom: &InteractionGeom, cum: Complex64) -> (f64, Complex64) {
                assert!(cum.norm() <= 1.0 + 1e-9);
                (geom.alpha, Complex64::new(-0.8, 0.1))
            }
        }
        let env = ground_env(30.0);
        let tx = TxConfig::new(Vec3::new(0.0, 0.0, 2.0));
        let rx = RxConfig::new(Vec3::new(5.0, 0.0, 2.0));
        let cfg = TraceConfig { angular_spacing: 0.05, ..TraceConfig::default() };
        let result = trace_paths(&env, &tx, &[rx], &Lossy, &cfg).unwrap();
        for p in &result.per_rx[0] {
            assert!(p.state.cum_gamma.norm() <= 1.0 + 1e-9);
        }
    }
}
