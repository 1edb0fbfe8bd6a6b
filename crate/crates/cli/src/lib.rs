//! Command-line frontend: each subcommand runs one analysis and writes a
//! JSON document `{meta: {version, config}, data}` (or CSV samples for
//! `trace`).

pub mod args;
pub mod commands;
pub mod error;
pub mod output;

use args::Command;
use commands::Outcome;
use error::CliError;

pub fn run(cmd: &Command) -> Result<Outcome, CliError> {
    match cmd {
        Command::Trace(a) => commands::cmd_trace(cmd, a),
        Command::Classify(a) => commands::cmd_classify(cmd, a),
        Command::Residues(a) => commands::cmd_residues(cmd, a),
        Command::Precession(a) => commands::cmd_precession(cmd, a),
        Command::AtlasCheck(a) => commands::cmd_atlas_check(cmd, a),
    }
}
