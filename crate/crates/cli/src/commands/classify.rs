use serde::{Deserialize, Serialize};
use string_geodesics::elliptic::{
    curve_from_invariants, discriminant_closed_form, segments, CurveCase, Landmark, SegmentTable,
};
use string_geodesics::special::{CubicRootSet, PeriodLattice, WeierstrassInvariants};

use super::Outcome;
use crate::args::{Command, CurveArgs, Format};
use crate::error::CliError;
use crate::output::Document;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifyData {
    #[serde(rename = "H")]
    pub h: f64,
    #[serde(rename = "U")]
    pub u: f64,
    pub discriminant: f64,
    /// `Δ` from the closed form in `(H, U)`.
    pub discriminant_closed_form: f64,
    pub case: CurveCase,
    pub invariants: WeierstrassInvariants,
    pub roots: CubicRootSet,
    pub lattice: Option<PeriodLattice>,
    /// Absent for degenerate curves.
    pub segments: Option<SegmentTable>,
    pub landmarks: Vec<Landmark>,
}

pub(crate) fn require_positive_h(h: f64) -> Result<(), CliError> {
    if h > 0.0 && h.is_finite() {
        Ok(())
    } else {
        Err(CliError::config("--H", format!("must be positive, got {h}")))
    }
}

pub fn cmd_classify(cmd: &Command, args: &CurveArgs) -> Result<Outcome, CliError> {
    require_positive_h(args.h)?;
    if !args.u.is_finite() {
        return Err(CliError::config("--U", "must be finite"));
    }
    if args.output.format != Format::Json {
        return Err(CliError::config("--format", "csv is only available for trace"));
    }
    let curve = curve_from_invariants(args.h, args.u).map_err(|e| CliError::config("--H", e.to_string()))?;
    let table = match curve.case {
        CurveCase::Degenerate => None,
        _ => Some(segments(&curve).map_err(CliError::run)?),
    };
    let data = ClassifyData {
        h: args.h,
        u: args.u,
        discriminant: curve.discriminant(),
        discriminant_closed_form: discriminant_closed_form(args.h, args.u),
        case: curve.case,
        invariants: curve.inv,
        roots: curve.roots,
        lattice: curve.lattice,
        segments: table,
        landmarks: curve.landmarks.to_vec(),
    };
    let summary = vec![format!(
        "case {:?}, discriminant {}, {} segments",
        data.case,
        data.discriminant,
        data.segments.as_ref().map_or(0, |t| t.segments.len())
    )];
    Ok(Outcome { document: Document::new(cmd, data).to_json()?, summary, failed: None })
}
