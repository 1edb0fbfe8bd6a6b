use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::atlas::{hamiltonian_gradient, ChartId};
use crate::flow::Trajectory;
use crate::special::WeierstrassP;

use super::{EllipticCurveData, EllipticError, Result};

/// Samples with `|ω|` above this are skipped: near the singularity `℘` has
/// a pole and absolute deviations stop being meaningful.
const OMEGA_CAP: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryFit {
    /// Offset in `ω(s) = ℘(s·√(H/2) − z0)`.
    pub z0: Complex64,
    pub s_start: f64,
    pub max_deviation: f64,
    pub compared: usize,
}

/// Fixes `z0` from the first Eddington–Finkelstein sample of `traj` and
/// compares `℘` with every sample in `[s_start, s_start + window]`.
pub fn fit_trajectory(curve: &EllipticCurveData, traj: &Trajectory, window: f64) -> Result<TrajectoryFit> {
    let wp = WeierstrassP::new(curve.inv)?;
    let k = (curve.h / 2.0).sqrt();
    let anchor = traj
        .samples
        .iter()
        .find(|s| matches!(s.state.chart, ChartId::EfAdv | ChartId::EfRet) && s.omega().is_some_and(|w| w.abs() < OMEGA_CAP))
        .ok_or(EllipticError::Fit("no Eddington–Finkelstein sample"))?;
    let w0 = anchor.omega().expect("checked above");
    let grad = hamiltonian_gradient(&anchor.state).map_err(|_| EllipticError::Fit("anchor off the atlas"))?;
    let slope = grad.momentum[1] / k;
    let zstar = wp.inverse(Complex64::new(w0, 0.0), Some(Complex64::new(slope, 0.0)))?;
    let z0 = Complex64::new(anchor.s * k, 0.0) - zstar;

    let (lo, hi) = {
        let end = anchor.s + window;
        (anchor.s.min(end), anchor.s.max(end))
    };
    let mut max_deviation: f64 = 0.0;
    let mut compared = 0;
    for smp in traj.samples.iter().filter(|s| s.s >= lo && s.s <= hi) {
        let Some(w) = smp.omega().filter(|w| w.abs() < OMEGA_CAP) else { continue };
        let Ok((p, _)) = wp.eval(Complex64::new(smp.s * k, 0.0) - z0) else { continue };
        max_deviation = max_deviation.max((p - w).norm());
        compared += 1;
    }
    if compared == 0 {
        return Err(EllipticError::Fit("no samples in the window"));
    }
    Ok(TrajectoryFit { z0, s_start: anchor.s, max_deviation, compared })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atlas::CotangentState;
    use crate::elliptic::curve_from_invariants;
    use crate::flow::{init_null, integrate, Direction};

    #[test]
    fn matches_integrated_b_segment() {
        let (h, u) = (1.0, 0.1);
        let curve = curve_from_invariants(h, u).unwrap();
        let start = CotangentState::new(ChartId::EfAdv, [0.0, -0.3], [u, 0.0]);
        let (c, _, s) = init_null(h, &start, Direction::Increasing).unwrap();
        let period = 2.0 * curve.real_half_period().unwrap() * (2.0 / h).sqrt();
        let t = integrate(&s, &c, (0.0, period), 1e-12).unwrap();
        let fit = fit_trajectory(&curve, &t, period).unwrap();
        assert!(fit.max_deviation < 1e-7, "{fit:?}");
        assert!(fit.compared > 20);
        // the B segment sits on the line Im z = ω3
        let w3 = curve.lattice.unwrap().omega3.im;
        assert!(((fit.z0.im.abs() % (2.0 * w3)) - w3).abs() < 1e-8, "{fit:?}");
    }

    #[test]
    fn matches_case2_away_from_pole() {
        let (h, u) = (1.0, 1.0);
        let curve = curve_from_invariants(h, u).unwrap();
        let start = CotangentState::new(ChartId::EfAdv, [0.0, 0.0], [u, 0.0]);
        let (c, _, s) = init_null(h, &start, Direction::Increasing).unwrap();
        let t = integrate(&s, &c, (0.0, 10.0), 1e-12).unwrap();
        let fit = fit_trajectory(&curve, &t, 10.0).unwrap();
        assert!(fit.max_deviation < 1e-7, "{fit:?}");
    }
}
