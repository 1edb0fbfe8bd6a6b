use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use string_geodesics::elliptic::{advance_per_period, tune_closure};
use string_geodesics::flow::{advances, integrate_with, precession, ConservedSet, IntegrateOptions, SphereGeodesic};

use super::{start_state, Outcome};
use crate::args::{Command, Format, PrecessionArgs};
use crate::error::CliError;
use crate::output::Document;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PassRow {
    pub index: usize,
    pub s_enter: f64,
    pub s_exit: f64,
    pub theta_enter: f64,
    pub theta_exit: f64,
    /// Angle swept inside the pass.
    pub sweep: f64,
    /// `θ_enter` minus that of the previous pass.
    pub delta_theta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RationalFlag {
    /// `Δθ/2π ≈ p/q` in lowest terms.
    pub p: i64,
    pub q: u32,
    pub error: f64,
    /// Passes after which the sphere phase repeats.
    pub closes_after: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrecessionData {
    pub conserved: ConservedSet,
    pub sphere: SphereGeodesic,
    pub tuned: Option<(u32, u32)>,
    pub passes: Vec<PassRow>,
    pub mean_delta_theta: Option<f64>,
    /// Largest deviation of a `Δθ` from the mean.
    pub delta_theta_spread: Option<f64>,
    /// Advance per real period from the curve's half period.
    pub predicted_delta_theta: Option<f64>,
    pub rational: Option<RationalFlag>,
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Smallest-denominator `p/q` within `tol` of `x`.
pub fn near_rational(x: f64, tol: f64, max_q: u32) -> Option<RationalFlag> {
    (1..=max_q.max(1)).find_map(|q| {
        let p = (x * q as f64).round();
        let error = (x - p / q as f64).abs();
        (error <= tol).then(|| {
            let p = p as i64;
            let g = gcd(p, q as i64).max(1);
            let q = (q as i64 / g) as u32;
            RationalFlag { p: p / g, q, error, closes_after: q }
        })
    })
}

pub fn cmd_precession(cmd: &Command, args: &PrecessionArgs) -> Result<Outcome, CliError> {
    let g = &args.geodesic;
    let span = g.validate()?;
    if args.output().format != Format::Json {
        return Err(CliError::config("--format", "csv is only available for trace"));
    }
    if !(args.rational_tol > 0.0) {
        return Err(CliError::config("--rational-tol", "must be positive"));
    }
    let u_override = match args.tune {
        Some((p, q)) => {
            let h = g.h.or(g.h2).ok_or_else(|| CliError::config("--H", "required with --tune"))?;
            if !(h > 0.0) {
                return Err(CliError::config("--H", "must be positive with --tune"));
            }
            Some(tune_closure(h, p, q).map_err(|e| CliError::config("--tune", e.to_string()))?)
        }
        None => None,
    };
    let (conserved, sphere, start) = start_state(g, u_override)?;
    let opts = IntegrateOptions { tol: g.tol, dense: true, convention: g.convention, ..Default::default() };
    let traj = integrate_with(&start, &conserved, span, &opts).map_err(CliError::run)?;
    let passes = precession(&traj, &sphere);
    let adv = advances(&passes);
    let rows: Vec<PassRow> = passes
        .iter()
        .enumerate()
        .map(|(i, p)| PassRow {
            index: i,
            s_enter: p.s_enter,
            s_exit: p.s_exit,
            theta_enter: p.theta_enter,
            theta_exit: p.theta_exit,
            sweep: p.sweep(),
            delta_theta: i.checked_sub(1).map(|j| adv[j]),
        })
        .collect();
    let mean = (!adv.is_empty()).then(|| adv.iter().sum::<f64>() / adv.len() as f64);
    let spread = mean.map(|m| adv.iter().map(|a| (a - m).abs()).fold(0.0, f64::max));
    let predicted = if conserved.h > 0.0 {
        advance_per_period(conserved.h, conserved.u).ok().map(|a| a * (conserved.h2 / conserved.h).sqrt())
    } else {
        None
    };
    let rational = mean.and_then(|m| near_rational(m / (2.0 * PI), args.rational_tol, args.max_denominator));
    let mut summary = vec![format!("{} passes", rows.len())];
    if let (Some(m), Some(sp)) = (mean, spread) {
        summary.push(format!("mean delta theta = {m} rad (spread {sp:.3e})"));
    }
    if let Some(r) = &rational {
        summary.push(format!("delta theta / 2pi = {}/{}: closes after {} passes", r.p, r.q, r.closes_after));
    }
    let data = PrecessionData {
        conserved,
        sphere,
        tuned: args.tune,
        passes: rows,
        mean_delta_theta: mean,
        delta_theta_spread: spread,
        predicted_delta_theta: predicted,
        rational,
    };
    Ok(Outcome { document: Document::new(cmd, data).to_json()?, summary, failed: None })
}

impl PrecessionArgs {
    fn output(&self) -> &crate::args::OutputArgs {
        &self.geodesic.output
    }
}
