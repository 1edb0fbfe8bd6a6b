use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use string_geodesics::atlas::{hamiltonian, CotangentState};
use string_geodesics::flow::{
    conserved_u, integrate_with, ConservedSet, Event, EventKind, IntegrateOptions, SphereGeodesic, Trajectory,
};

use super::{finite, start_state, Outcome};
use crate::args::{Command, Format, TraceArgs};
use crate::error::CliError;
use crate::output::{num, Document};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceSample {
    pub s: f64,
    /// Chart-local state; add `boost` back to the null coordinate for the
    /// global value.
    pub state: CotangentState<f64>,
    pub boost: f64,
    pub mirrored: bool,
    pub omega: Option<f64>,
    #[serde(rename = "H_err")]
    pub h_err: f64,
    pub theta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DriftSummary {
    pub max_h_err: f64,
    pub max_u_err: f64,
    /// Sphere angle swept over the span, radians.
    pub angular_motion: f64,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
    pub event_counts: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceData {
    pub conserved: ConservedSet,
    pub sphere: SphereGeodesic,
    pub start: CotangentState<f64>,
    pub span: (f64, f64),
    pub samples: Vec<TraceSample>,
    pub events: Vec<Event>,
    pub summary: DriftSummary,
}

fn kind_name(k: EventKind) -> String {
    serde_json::to_value(k).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default()
}

pub(crate) fn trace_data(
    conserved: ConservedSet,
    sphere: SphereGeodesic,
    start: CotangentState<f64>,
    span: (f64, f64),
    traj: &Trajectory,
) -> TraceData {
    let samples: Vec<TraceSample> = traj
        .samples
        .iter()
        .map(|p| TraceSample {
            s: p.s,
            state: p.state,
            boost: p.boost,
            mirrored: p.mirrored,
            omega: finite(p.omega()),
            h_err: hamiltonian(&p.state).map_or(f64::NAN, |h| h - conserved.h),
            theta: sphere.theta(p.s),
        })
        .collect();
    let events: Vec<Event> = traj.events.iter().map(|e| Event { omega: finite(e.omega), ..*e }).collect();
    let max_h_err = samples.iter().map(|p| p.h_err.abs()).fold(0.0, f64::max);
    let max_u_err = traj.samples.iter().map(|p| (conserved_u(&p.state) - conserved.u).abs()).fold(0.0, f64::max);
    let mut event_counts = BTreeMap::new();
    for e in &events {
        *event_counts.entry(kind_name(e.kind)).or_insert(0) += 1;
    }
    let summary = DriftSummary {
        max_h_err,
        max_u_err,
        angular_motion: sphere.theta(span.1) - sphere.theta(span.0),
        accepted_steps: traj.accepted_steps,
        rejected_steps: traj.rejected_steps,
        event_counts,
    };
    TraceData { conserved, sphere, start, span, samples, events, summary }
}

/// Samples as CSV with the null coordinate restored.
pub fn trace_csv(data: &TraceData) -> String {
    let mut out = String::from("s,chart,c1,c2,m1,m2,H_err\n");
    for p in &data.samples {
        let g = string_geodesics::flow::unboost(&p.state, p.boost);
        let [c1, c2, m1, m2] = g.to_array();
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            num(p.s),
            g.chart,
            num(c1),
            num(c2),
            num(m1),
            num(m2),
            num(p.h_err)
        ));
    }
    out
}

pub fn cmd_trace(cmd: &Command, args: &TraceArgs) -> Result<Outcome, CliError> {
    let span = args.validate()?;
    if args.stride == 0 {
        return Err(CliError::config("--stride", "must be at least 1"));
    }
    let (conserved, sphere, start) = start_state(args, None)?;
    let opts =
        IntegrateOptions { tol: args.tol, sample_stride: args.stride, convention: args.convention, ..Default::default() };
    let traj = integrate_with(&start, &conserved, span, &opts).map_err(CliError::run)?;
    let data = trace_data(conserved, sphere, start, span, &traj);
    let s = &data.summary;
    let mut summary = vec![
        format!("H = {}, U = {}, H2 = {}", conserved.h, conserved.u, conserved.h2),
        format!("max |H - H0| = {:.3e}, max |U - U0| = {:.3e}", s.max_h_err, s.max_u_err),
        format!("angular motion = {} rad", s.angular_motion),
        format!("steps: {} accepted, {} rejected; {} samples", s.accepted_steps, s.rejected_steps, data.samples.len()),
    ];
    let counts: Vec<String> = s.event_counts.iter().map(|(k, n)| format!("{k} {n}")).collect();
    summary.push(format!("events: {}", if counts.is_empty() { "none".to_string() } else { counts.join(", ") }));
    let document = match args.output.format {
        Format::Json => Document::new(cmd, data).to_json()?,
        Format::Csv => trace_csv(&data),
    };
    Ok(Outcome { document, summary, failed: None })
}
