use serde::{Deserialize, Serialize};

use crate::atlas::CotangentState;

use super::{integrate_with, ConservedSet, EventKind, FlowError, IntegrateOptions, Trajectory};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    /// Parameter reached backwards and forwards.
    pub reached_s: (f64, f64),
    /// Description of whatever stopped the integration early.
    pub obstruction: Option<String>,
    pub max_drift: f64,
    pub singularity_crossings: usize,
    pub horizon_crossings: usize,
    pub scri_crossings: usize,
    pub steps: usize,
}

impl ProbeReport {
    pub fn complete(&self, s_max: f64) -> bool {
        self.obstruction.is_none() && self.reached_s.0 <= -s_max && self.reached_s.1 >= s_max
    }
}

/// Integrates to `±s_max` and reports how far the flow got in each direction.
///
/// Hitting the step budget or leaving the atlas is reported as an
/// obstruction rather than an error.
pub fn completeness_probe(
    start: &CotangentState<f64>,
    conserved: &ConservedSet,
    s_max: f64,
    tol: f64,
) -> Result<ProbeReport, FlowError> {
    let opts = IntegrateOptions { tol, sample_stride: 32, ..IntegrateOptions::default() };
    let mut report = ProbeReport {
        reached_s: (0.0, 0.0),
        obstruction: None,
        max_drift: 0.0,
        singularity_crossings: 0,
        horizon_crossings: 0,
        scri_crossings: 0,
        steps: 0,
    };
    for end in [s_max, -s_max] {
        match integrate_with(start, conserved, (0.0, end), &opts) {
            Ok(t) => absorb(&mut report, &t, end),
            Err(e @ (FlowError::StepUnderflow { .. } | FlowError::LeftAtlas { .. } | FlowError::MaxSteps(_))) => {
                report.obstruction = Some(e.to_string());
            }
            Err(e) => return Err(e),
        }
    }
    Ok(report)
}

fn absorb(report: &mut ProbeReport, t: &Trajectory, end: f64) {
    let reached = t.samples.last().map_or(0.0, |s| s.s);
    if end > 0.0 {
        report.reached_s.1 = reached;
    } else {
        report.reached_s.0 = reached;
    }
    report.max_drift = report.max_drift.max(t.energy_drift());
    report.singularity_crossings += t.events_of(EventKind::Singularity).count();
    report.horizon_crossings += t.events_of(EventKind::Horizon).count();
    report.scri_crossings += t.crossings().filter(|e| e.kind.is_scri()).count();
    report.steps += t.accepted_steps;
}
