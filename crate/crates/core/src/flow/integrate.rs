use crate::atlas::{classify_region, hamiltonian, radius, vector_field, ChartId, CotangentState, Quadrant, RegionLabel};

use super::dop853::{attempt, dense, initial_step, Controller, DenseStep};
use super::policy::{perform_switch, rebase, switch_policy};
use super::{place, ConservedSet, DenseSegment, Event, EventKind, FlowError, IntegrateOptions, Sample, Trajectory};

const HORIZON: usize = 0;
const SCRI: usize = 1;
const SINGULARITY: usize = 2;
const TURNING: usize = 3;

/// Integrates the string geodesic through `s_span` with default options.
pub fn integrate(
    start: &CotangentState<f64>,
    conserved: &ConservedSet,
    s_span: (f64, f64),
    tol: f64,
) -> Result<Trajectory, FlowError> {
    integrate_with(start, conserved, s_span, &IntegrateOptions { tol, ..Default::default() })
}

/// Horizon, scri, singularity and turning-point indicator functions.
fn indicators(chart: ChartId, y: &[f64; 4], f: &[f64; 4]) -> [f64; 4] {
    let nan = f64::NAN;
    match chart {
        ChartId::EfAdv | ChartId::EfRet => [y[1] - 2.0 / 3.0, y[1] + 1.0 / 3.0, nan, f[1]],
        ChartId::Xu | ChartId::Xv | ChartId::Xt | ChartId::Xp | ChartId::Xq => [y[1] * y[1] - 1.0, nan, y[1], f[1]],
        ChartId::Ks => [y[0] * y[1], nan, nan, y[0] * f[1] + y[1] * f[0]],
        ChartId::Yp | ChartId::Yq => [y[1] - 1.0, y[1], nan, f[1]],
        ChartId::Schw => [y[1] - 1.0, nan, nan, f[1]],
    }
}

fn crossed(a: f64, b: f64) -> bool {
    a.is_finite() && b.is_finite() && a != 0.0 && (b == 0.0 || a.signum() != b.signum())
}

/// Illinois false position on a bracketing interval.
fn refine(g: impl Fn(f64) -> f64, mut a: f64, mut b: f64, mut ga: f64, mut gb: f64) -> f64 {
    for _ in 0..200 {
        if gb == 0.0 {
            return b;
        }
        let c = (a * gb - b * ga) / (gb - ga);
        let gc = g(c);
        if !gc.is_finite() {
            return c;
        }
        if gc * gb < 0.0 {
            a = b;
            ga = gb;
        } else {
            ga *= 0.5;
        }
        b = c;
        gb = gc;
        if (b - a).abs() <= 4.0 * f64::EPSILON * (1.0 + b.abs()) {
            break;
        }
    }
    b
}

fn region_of(sample: &Sample) -> RegionLabel {
    let mut l = classify_region(&sample.state);
    if sample.mirrored {
        l.quadrant = match l.quadrant {
            Quadrant::I => Quadrant::III,
            Quadrant::II => Quadrant::IV,
            Quadrant::III => Quadrant::I,
            Quadrant::IV => Quadrant::II,
            Quadrant::Boundary => Quadrant::Boundary,
        };
    }
    l
}

fn event_for(kind: EventKind, sample: &Sample) -> Event {
    Event {
        s: sample.s,
        kind,
        region: region_of(sample),
        chart: sample.state.chart,
        omega: radius(&sample.state).map(|r| 1.0 / r - 1.0 / 3.0),
    }
}

fn scri_kind(chart: ChartId) -> EventKind {
    match chart {
        ChartId::EfRet | ChartId::Xv | ChartId::Xq | ChartId::Yq => EventKind::ScriPlus,
        _ => EventKind::ScriMinus,
    }
}

pub fn integrate_with(
    start: &CotangentState<f64>,
    conserved: &ConservedSet,
    s_span: (f64, f64),
    opts: &IntegrateOptions,
) -> Result<Trajectory, FlowError> {
    if !(opts.tol > 0.0) {
        return Err(FlowError::Argument("tolerance must be positive"));
    }
    let h_start = hamiltonian(start)?;
    if (h_start - conserved.h).abs() > 1e-8 * (1.0 + conserved.h.abs()) {
        return Err(FlowError::InconsistentStart { expected: conserved.h, actual: h_start });
    }
    let (s0, s_end) = s_span;
    let dir = if s_end >= s0 { 1.0 } else { -1.0 };

    let mut cur = *start;
    if cur.chart == ChartId::Ks {
        cur.ks_x = None;
    }
    let mut boost = 0.0;
    let mut mirrored = false;
    let mut events = Vec::new();
    let target = switch_policy(&cur);
    if target != cur.chart {
        let (next, refl) = perform_switch(&cur, target, opts.convention)?;
        cur = next;
        mirrored ^= refl;
        events.push(event_for(EventKind::ChartSwitch, &Sample { s: s0, state: cur, boost, mirrored }));
    }
    boost += rebase(&mut cur);

    let mut traj = Trajectory {
        samples: vec![Sample { s: s0, state: cur, boost, mirrored }],
        events,
        conserved: *conserved,
        dense: Vec::new(),
        accepted_steps: 0,
        rejected_steps: 0,
    };
    if s_end == s0 {
        return Ok(traj);
    }

    let mut s = s0;
    let mut y = cur.to_array();
    let mut h_abs: Option<f64> = None;
    let mut ctl = Controller::default();
    let mut since_sample = 0usize;

    'segments: loop {
        let tmpl = cur;
        let mut rhs = |_: f64, v: &[f64; 4]| vector_field(&tmpl.with_array(*v));
        let mut f = rhs(s, &y)?;
        let mut h = match h_abs {
            Some(h) => h,
            None => initial_step(&mut rhs, s, &y, &f, dir, opts.tol, opts.tol, opts.max_step),
        };
        while dir * (s_end - s) > 0.0 {
            if traj.accepted_steps + traj.rejected_steps >= opts.max_steps {
                return Err(FlowError::MaxSteps(opts.max_steps));
            }
            h = h.min(opts.max_step).min((s_end - s).abs());
            if h < 1e-14 * s.abs().max(1.0) {
                return Err(FlowError::StepUnderflow { s, h });
            }
            let step = dir * h;
            let trial = attempt(&mut rhs, s, &y, &f, step, opts.tol, opts.tol);
            let (ok, factor) = match &trial {
                Ok(a) => ctl.judge(a.error),
                Err(_) => ctl.judge(f64::INFINITY),
            };
            if !ok {
                traj.rejected_steps += 1;
                h *= factor;
                continue;
            }
            let a = trial.expect("accepted steps evaluated");
            traj.accepted_steps += 1;
            let s_new = if (s_end - (s + step)).abs() <= 4.0 * f64::EPSILON * s_end.abs().max(1.0) { s_end } else { s + step };

            let ev_old = indicators(tmpl.chart, &y, &f);
            let ev_new = indicators(tmpl.chart, &a.y_new, &a.f_new);
            let hits: Vec<usize> = (0..4).filter(|&i| crossed(ev_old[i], ev_new[i])).collect();
            let need_dense = opts.dense || !hits.is_empty();
            let dstep: Option<DenseStep<4>> = if need_dense { Some(dense(&mut rhs, s, &y, step, &a)?) } else { None };
            let seg_template = Sample { s, state: tmpl, boost, mirrored };

            let mut found: Vec<(f64, EventKind)> = Vec::new();
            if let Some(d) = &dstep {
                for &i in &hits {
                    let g = |t: f64| {
                        let v = d.eval(t);
                        let fv = if i == TURNING { vector_field(&tmpl.with_array(v)).map_or([f64::NAN; 4], |x| x) } else { [0.0; 4] };
                        indicators(tmpl.chart, &v, &fv)[i]
                    };
                    let t = refine(g, s, s + step, ev_old[i], ev_new[i]);
                    let kind = match i {
                        HORIZON => EventKind::Horizon,
                        SCRI => scri_kind(tmpl.chart),
                        SINGULARITY => EventKind::Singularity,
                        _ => EventKind::TurningPoint,
                    };
                    found.push((t, kind));
                }
            }
            found.sort_by(|x, y| (dir * x.0).total_cmp(&(dir * y.0)));
            for (t, kind) in found {
                let d = dstep.as_ref().expect("dense step present");
                let smp = Sample { s: t, state: place(&tmpl, d.eval(t)), boost, mirrored };
                traj.events.push(event_for(kind, &smp));
                if opts.stop_at_scri && kind.is_scri() {
                    traj.samples.push(smp);
                    if let Some(d) = dstep {
                        traj.dense.push(DenseSegment { step: d, template: seg_template });
                    }
                    return Ok(traj);
                }
            }
            if let Some(d) = dstep.filter(|_| opts.dense) {
                traj.dense.push(DenseSegment { step: d, template: seg_template });
            }

            s = s_new;
            y = a.y_new;
            f = a.f_new;
            h *= factor;
            since_sample += 1;
            let state = place(&tmpl, y);
            let done = dir * (s_end - s) <= 0.0;
            if since_sample >= opts.sample_stride.max(1) || done {
                traj.samples.push(Sample { s, state, boost, mirrored });
                since_sample = 0;
            }
            if !y.iter().all(|v| v.is_finite()) {
                return Err(FlowError::LeftAtlas { s, reason: format!("non-finite state in {}", tmpl.chart) });
            }

            let target = switch_policy(&state);
            if target != tmpl.chart && !done {
                let (mut next, refl) = perform_switch(&state, target, opts.convention)
                    .map_err(|e| FlowError::LeftAtlas { s, reason: e.to_string() })?;
                mirrored ^= refl;
                boost += rebase(&mut next);
                cur = next;
                y = cur.to_array();
                traj.events.push(event_for(EventKind::ChartSwitch, &Sample { s, state: cur, boost, mirrored }));
                h_abs = Some(h);
                ctl.reset();
                continue 'segments;
            }
        }
        break;
    }
    Ok(traj)
}
