//! Hamiltonian geodesic flow of the string factor, paired with the great
//! circle of the sphere factor.
//!
//! Integration runs in one chart at a time and hops between charts
//! according to [`switch_policy`]: Eddington–Finkelstein charts in the bulk
//! and across scri, Kruskal–Szekeres near the horizon and the double cover
//! `r = x²` through the singularity.

pub(crate) mod dop853;
mod init;
mod integrate;
mod policy;
mod precession;
mod probe;
mod sphere;
#[allow(clippy::excessive_precision, clippy::unreadable_literal)]
mod tableau;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::atlas::{AtlasError, ChartId, CotangentState, RegionLabel, UConvention};

pub use dop853::DenseStep;
pub use init::{init_null, Direction};
pub use integrate::{integrate, integrate_with};
pub use policy::{conserved_u, radial_momentum_ur, switch_policy, unboost};
pub use precession::{advances, precession, Pass};
pub use probe::{completeness_probe, ProbeReport};
pub use sphere::{sphere_point, SphereGeodesic};

/// Flow invariants: string energy, the momentum conjugate to `u`, and the
/// sphere energy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConservedSet {
    #[serde(rename = "H")]
    pub h: f64,
    #[serde(rename = "U")]
    pub u: f64,
    #[serde(rename = "H2")]
    pub h2: f64,
}

impl ConservedSet {
    /// `H_Σ − H₂`, zero for null geodesics of the product.
    pub fn total(&self) -> f64 {
        self.h - self.h2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    Horizon,
    ScriPlus,
    ScriMinus,
    Singularity,
    ChartSwitch,
    TurningPoint,
}

impl EventKind {
    pub fn is_scri(self) -> bool {
        matches!(self, EventKind::ScriPlus | EventKind::ScriMinus)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub s: f64,
    pub kind: EventKind,
    pub region: RegionLabel,
    /// Chart in force when the event fired (the target chart for switches).
    pub chart: ChartId,
    /// `ω = 1/r − 1/3` at the event, where finite.
    pub omega: Option<f64>,
}

/// A recorded point of the trajectory.
///
/// `state` holds chart-local coordinates. Null coordinates are kept near
/// zero by a running boost (`u → u − b`, `v → v + b`), which keeps
/// `p = e^{u/2}` representable over long runs; see [`unboost`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub s: f64,
    pub state: CotangentState<f64>,
    pub boost: f64,
    /// Whether the Kruskal reflection has been applied an odd number of
    /// times (quadrant labels of I/III and II/IV are then exchanged).
    pub mirrored: bool,
}

impl Sample {
    pub fn global_state(&self) -> CotangentState<f64> {
        unboost(&self.state, self.boost)
    }

    pub fn omega(&self) -> Option<f64> {
        crate::atlas::radius(&self.state).map(|r| 1.0 / r - 1.0 / 3.0)
    }
}

/// Dense output of one accepted step together with the chart context.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseSegment {
    pub step: DenseStep<4>,
    pub template: Sample,
}

impl DenseSegment {
    pub fn contains(&self, s: f64) -> bool {
        let (a, b) = (self.step.s0, self.step.s1());
        s >= a.min(b) && s <= a.max(b)
    }

    pub fn sample(&self, s: f64) -> Sample {
        let y = self.step.eval(s);
        Sample { s, state: place(&self.template.state, y), ..self.template }
    }
}

/// `tmpl` with coordinates `y`; in the double-cover charts the sheet
/// follows the sign of `x`.
pub(crate) fn place(tmpl: &CotangentState<f64>, y: [f64; 4]) -> CotangentState<f64> {
    let mut s = tmpl.with_array(y);
    if s.chart.carries_x() {
        if let Some(sheet) = crate::atlas::Sheet::of(y[1]) {
            s.sheet = sheet;
        }
    }
    s
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub events: Vec<Event>,
    pub conserved: ConservedSet,
    pub dense: Vec<DenseSegment>,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
}

impl Trajectory {
    pub fn s_range(&self) -> (f64, f64) {
        let a = self.samples.first().map_or(0.0, |s| s.s);
        let b = self.samples.last().map_or(0.0, |s| s.s);
        (a.min(b), a.max(b))
    }

    /// Interpolated sample; requires `dense` output.
    pub fn sample_at(&self, s: f64) -> Option<Sample> {
        let forward = self.dense.first().is_none_or(|d| d.step.h > 0.0);
        let idx = self.dense.partition_point(|d| if forward { d.step.s1() < s } else { d.step.s1() > s });
        self.dense.get(idx).filter(|d| d.contains(s)).map(|d| d.sample(s))
    }

    /// Largest `|H(sample) − H|` over the samples.
    pub fn energy_drift(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| crate::atlas::hamiltonian(&s.state).map_or(f64::INFINITY, |h| (h - self.conserved.h).abs()))
            .fold(0.0, f64::max)
    }

    pub fn events_of(&self, kind: EventKind) -> impl Iterator<Item = &Event> {
        self.events.iter().filter(move |e| e.kind == kind)
    }

    /// Events other than chart switches.
    pub fn crossings(&self) -> impl Iterator<Item = &Event> {
        self.events.iter().filter(|e| e.kind != EventKind::ChartSwitch)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegrateOptions {
    /// Relative and absolute error tolerance per step.
    pub tol: f64,
    pub max_steps: usize,
    /// Keep the continuous extension of every step.
    pub dense: bool,
    /// Keep every `n`-th accepted step as a sample (events are always kept).
    pub sample_stride: usize,
    pub convention: UConvention,
    /// Stop at the first scri crossing instead of continuing past it.
    pub stop_at_scri: bool,
    pub max_step: f64,
}

impl Default for IntegrateOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_steps: 5_000_000,
            dense: false,
            sample_stride: 1,
            convention: UConvention::Plain,
            stop_at_scri: false,
            max_step: 1.0,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FlowError {
    #[error(transparent)]
    Atlas(#[from] AtlasError),
    #[error("step size underflow at s = {s} (h = {h:e})")]
    StepUnderflow { s: f64, h: f64 },
    #[error("state left the atlas at s = {s}: {reason}")]
    LeftAtlas { s: f64, reason: String },
    #[error("start energy {actual} differs from conserved {expected}")]
    InconsistentStart { expected: f64, actual: f64 },
    #[error("no real momentum gives H = {h2} here (discriminant {discriminant})")]
    Infeasible { h2: f64, discriminant: f64 },
    #[error("step budget of {0} exhausted")]
    MaxSteps(usize),
    #[error("invalid argument: {0}")]
    Argument(&'static str),
}
