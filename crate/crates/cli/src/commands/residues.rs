use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use string_geodesics::elliptic::{
    curve_from_invariants, du_residues, u_period_check, CurveCase, EllipticError, LoopKind, PeriodReport,
    ResidueReport,
};

use super::classify::require_positive_h;
use super::Outcome;
use crate::args::{Command, Format, ResidueArgs};
use crate::error::CliError;
use crate::output::Document;

/// Accepted distance of the u-period from `±4πi` and of contour residues
/// from their closed forms.
pub const PERIOD_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResiduesData {
    pub residues: ResidueReport,
    pub single_pole_loop: PeriodReport,
    pub double_pole_loop: PeriodReport,
    pub both_poles_loop: PeriodReport,
    /// Largest distance of a single-pole u-period from `±4πi`.
    pub period_error: f64,
    pub residue_discrepancy: f64,
}

fn contour_error(e: EllipticError) -> CliError {
    match e {
        EllipticError::Degenerate | EllipticError::Domain(_) => CliError::config("--U", e.to_string()),
        e => CliError::run(e),
    }
}

pub fn cmd_residues(cmd: &Command, args: &ResidueArgs) -> Result<Outcome, CliError> {
    require_positive_h(args.h)?;
    if args.epsilon != 1 && args.epsilon != -1 {
        return Err(CliError::config("--epsilon", format!("must be 1 or -1, got {}", args.epsilon)));
    }
    if args.output.format != Format::Json {
        return Err(CliError::config("--format", "csv is only available for trace"));
    }
    let curve = curve_from_invariants(args.h, args.u).map_err(contour_error)?;
    if curve.case == CurveCase::Degenerate {
        return Err(CliError::config("--U", "degenerate curve: U(8H - 27U²) = 0"));
    }
    let residues = du_residues(&curve, args.epsilon).map_err(contour_error)?;
    let single = u_period_check(&curve, args.epsilon, LoopKind::SinglePole).map_err(contour_error)?;
    let double = u_period_check(&curve, args.epsilon, LoopKind::DoublePole).map_err(contour_error)?;
    let both = u_period_check(&curve, args.epsilon, LoopKind::BothPoles).map_err(contour_error)?;
    let quarter = |p: &PeriodReport| (p.period.im.abs() - 4.0 * PI).abs().max(p.period.re.abs());
    let period_error = quarter(&single).max(quarter(&double));
    let data = ResiduesData {
        residues,
        single_pole_loop: single,
        double_pole_loop: double,
        both_poles_loop: both,
        period_error,
        residue_discrepancy: residues.max_discrepancy(),
    };
    let ok = period_error <= PERIOD_TOL && data.residue_discrepancy <= PERIOD_TOL && both.period.norm() <= PERIOD_TOL;
    let summary = vec![
        format!(
            "residues of Omega dz: {} (single), {} (double); du residues {:?}",
            residues.single_pole.residue, residues.double_pole.residue, residues.du_residues
        ),
        format!("u-period {} (error {:.3e}), both poles {}", single.period, period_error, both.period),
        format!("contour {}", if ok { "ok" } else { "FAILED" }),
    ];
    Ok(Outcome { document: Document::new(cmd, data).to_json()?, summary, failed: (!ok).then_some(3) })
}
