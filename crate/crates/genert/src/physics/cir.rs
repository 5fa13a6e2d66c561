//! Channel impulse response rendering: turning traced paths into multipath
//! component records.

use num_complex::Complex64;

use super::attenuation::attenuation_from_product;
use crate::geom::{RxConfig, TracedPath, TxConfig};
use crate::math::{AzEl, Vec3, SPEED_OF_LIGHT};

/// One multipath component: delay, departure/arrival angles, complex
/// attenuation, and the interaction-point geometry it came from.
#[derive(Clone, Debug)]
pub struct Mpc {
    pub tau: f64,
    pub aod: AzEl,
    pub aoa: AzEl,
    pub a: Complex64,
    pub k: usize,
    pub points: Vec<Vec3>,
    pub d: f64,
    /// Interaction surface sequence when rendered from a trace; empty for
    /// records loaded from CIR files.
    pub surface_ids: Vec<u32>,
}

impl Mpc {
    /// Magnitude of the cumulative interaction coefficient recovered from
    /// the attenuation and free-space terms.
    pub fn interaction_product_magnitude(&self, frequency: f64) -> f64 {
        let lambda = SPEED_OF_LIGHT / frequency;
        self.a.norm() * 4.0 * std::f64::consts::PI * self.d / lambda
    }

    /// Linear received power weight used by power-delay-profile statistics.
    pub fn linear_power(&self) -> f64 {
        self.a.norm_sqr()
    }
}

/// All multipath components of one Tx-Rx pair, sorted by delay.
#[derive(Clone, Debug, Default)]
pub struct Cir {
    pub tx_id: usize,
    pub rx_id: usize,
    pub mpcs: Vec<Mpc>,
}

/// Renders traced paths of one Tx-Rx pair into a CIR.
///
/// Departure angles point from the transmitter toward the first interaction
/// point (the receiver for line-of-sight); arrival angles are the direction
/// of propagation at the receiver, i.e. from the last interaction point (the
/// transmitter for line-of-sight) toward the receiver.
pub fn render_cir(
    paths: &[TracedPath],
    tx: &TxConfig,
    rx: &RxConfig,
    tx_id: usize,
    rx_id: usize,
) -> Cir {
    let lambda = tx.wavelength();
    let mut mpcs: Vec<Mpc> = paths
        .iter()
        .filter_map(|p| {
            let d = p.state.cum_distance;
            if !(d > 0.0) {
                return None;
            }
            let first = p.state.points.first().copied().unwrap_or(rx.position);
            let last = p.state.points.last().copied().unwrap_or(tx.position);
            let aod = AzEl::from_direction((first - tx.position).try_normalized()?);
            let aoa = AzEl::from_direction((rx.position - last).try_normalized()?);
            let a = attenuation_from_product(d, p.state.cum_gamma, lambda);
            Some(Mpc {
                tau: d / SPEED_OF_LIGHT,
                aod,
                aoa,
                a,
                k: p.k(),
                points: p.state.points.clone(),
                d,
                surface_ids: p.surface_ids.clone(),
            })
        })
        .collect();
    mpcs.sort_by(|x, y| x.tau.total_cmp(&y.tau));
    Cir { tx_id, rx_id, mpcs }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{RayState, RayStatus};

    fn los_path(tx: Vec3, rx: Vec3) -> TracedPath {
        let dir = (rx - tx).normalized();
        TracedPath {
            ray_index: 0,
            state: RayState {
                points: Vec::new(),
                direction: dir,
                cum_gamma: Complex64::new(1.0, 0.0),
                cum_distance: (rx - tx).norm(),
                status: RayStatus::Received,
            },
            interactions: Vec::new(),
            surface_ids: Vec::new(),
            capture_miss_m: 0.0,
        }
    }

    #[test]
    fn los_delay_and_angles() {
        let tx = TxConfig::new(Vec3::ZERO);
        let rxp = Vec3::new(299.792458, 0.0, 0.0);
        let rx = RxConfig::new(rxp);
        let cir = render_cir(&[los_path(tx.position, rxp)], &tx, &rx, 0, 0);
        assert_eq!(cir.mpcs.len(), 1);
        let m = &cir.mpcs[0];
        assert!((m.tau - 1e-6).abs() < 1e-18);
        assert_eq!((m.aod.azimuth, m.aod.elevation), (0.0, 0.0));
        assert_eq!((m.aoa.azimuth, m.aoa.elevation), (0.0, 0.0));
        assert_eq!(m.k, 0);
    }

    #[test]
    fn rx_above_tx_gives_vertical_departure() {
        let tx = TxConfig::new(Vec3::ZERO);
        let rxp = Vec3::new(0.0, 0.0, 10.0);
        let rx = RxConfig::new(rxp);
        let cir = render_cir(&[los_path(tx.position, rxp)], &tx, &rx, 0, 0);
        assert!((cir.mpcs[0].aod.elevation - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn mpcs_sorted_by_delay() {
        let tx = TxConfig::new(Vec3::ZERO);
        let rx = RxConfig::new(Vec3::new(150.0, 0.0, 0.0));
        let mut long = los_path(tx.position, rx.position);
        long.state.cum_distance = 150.0;
        let mut short = los_path(tx.position, rx.position);
        short.state.cum_distance = 100.0;
        let cir = render_cir(&[long, short], &tx, &rx, 0, 0);
        assert!((cir.mpcs[0].d - 100.0).abs() < 1e-12);
        assert!((cir.mpcs[1].d - 150.0).abs() < 1e-12);
    }

    #[test]
    fn energy_consistency_in_db() {
        // Received power equals free-space loss plus interaction losses.
        let tx = TxConfig::new(Vec3::ZERO);
        let rx = RxConfig::new(Vec3::new(80.0, 0.0, 0.0));
        let mut p = los_path(tx.position, rx.position);
        p.state.cum_gamma = Complex64::new(-0.25, 0.0);
        let cir = render_cir(&[p], &tx, &rx, 0, 0);
        let m = &cir.mpcs[0];
        let lambda = tx.wavelength();
        let fs_db = 20.0 * (lambda / (4.0 * std::f64::consts::PI * m.d)).log10();
        let int_db = 20.0 * 0.25_f64.log10();
        let a_db = 20.0 * m.a.norm().log10();
        assert!((a_db - (fs_db + int_db)).abs() < 1e-9);
        assert!((m.interaction_product_magnitude(tx.frequency_hz) - 0.25).abs() < 1e-12);
    }
}
