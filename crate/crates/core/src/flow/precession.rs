use serde::{Deserialize, Serialize};

use crate::atlas::Sheet;

use super::{EventKind, SphereGeodesic, Trajectory};

/// One traversal of the accessible exterior `−1/3 < ω < 2/3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pass {
    pub s_enter: f64,
    pub s_exit: f64,
    pub theta_enter: f64,
    pub theta_exit: f64,
}

impl Pass {
    pub fn sweep(&self) -> f64 {
        self.theta_exit - self.theta_enter
    }
}

/// Passes of `traj` through an exterior region on the positive sheet,
/// bounded on both sides by horizon or scri events. Copies of the exterior
/// reached through the Kruskal reflection count as well. Angles are
/// unwrapped.
///
/// Partial passes at either end of the trajectory are dropped.
pub fn precession(traj: &Trajectory, geo: &SphereGeodesic) -> Vec<Pass> {
    let bounds: Vec<f64> = traj
        .events
        .iter()
        .filter(|e| e.kind == EventKind::Horizon || e.kind.is_scri())
        .map(|e| e.s)
        .collect();
    let mut passes = Vec::new();
    for w in bounds.windows(2) {
        let (a, b) = (w[0].min(w[1]), w[0].max(w[1]));
        if b - a <= 0.0 {
            continue;
        }
        let mid = 0.5 * (a + b);
        let probe = traj.sample_at(mid).or_else(|| {
            traj.samples
                .iter()
                .filter(|s| s.s > a && s.s < b)
                .min_by(|x, y| (x.s - mid).abs().total_cmp(&(y.s - mid).abs()))
                .copied()
        });
        let Some(sample) = probe else { continue };
        let exterior = sample.omega().is_some_and(|w| w > -1.0 / 3.0 && w < 2.0 / 3.0);
        if exterior && sample.state.sheet == Sheet::Positive {
            let (s_enter, s_exit) = (w[0], w[1]);
            passes.push(Pass { s_enter, s_exit, theta_enter: geo.theta(s_enter), theta_exit: geo.theta(s_exit) });
        }
    }
    passes
}

/// Angle advance between the entries of consecutive passes.
pub fn advances(passes: &[Pass]) -> Vec<f64> {
    passes.windows(2).map(|w| w[1].theta_enter - w[0].theta_enter).collect()
}
