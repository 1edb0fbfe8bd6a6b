use serde::{Deserialize, Serialize};
use string_geodesics::atlas::{atlas_check, AtlasCheckConfig, AtlasCheckReport};

use super::Outcome;
use crate::args::{check_tol, AtlasArgs, Command, Format};
use crate::error::CliError;
use crate::output::Document;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtlasData {
    pub report: AtlasCheckReport,
    pub passed: bool,
}

pub fn cmd_atlas_check(cmd: &Command, args: &AtlasArgs) -> Result<Outcome, CliError> {
    if args.n == 0 {
        return Err(CliError::config("--n", "must be at least 1"));
    }
    check_tol(args.tol)?;
    if args.output.format != Format::Json {
        return Err(CliError::config("--format", "csv is only available for trace"));
    }
    let report = atlas_check(&AtlasCheckConfig {
        n: args.n,
        seed: args.output.seed,
        tol: args.tol,
        inject_fault: args.inject_fault,
    });
    let passed = report.passed();
    let mut summary = vec![format!(
        "{} checks, {} failures; max energy error {:.3e}, round trip {:.3e}, overlap relation {:.3e}",
        report.checks,
        report.failures,
        report.max_energy_error,
        report.max_round_trip_error,
        report.max_overlap_relation_error
    )];
    if let Some(f) = &report.first_failure {
        summary.push(format!("first failure: {f}"));
    }
    Ok(Outcome {
        document: Document::new(cmd, AtlasData { report, passed }).to_json()?,
        summary,
        failed: (!passed).then_some(1),
    })
}
