use std::process::ExitCode;

use clap::Parser;
use string_geodesics_cli::args::Cli;
use string_geodesics_cli::error::CliError;
use string_geodesics_cli::output::emit;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = cli.command.output().out.clone();
    let outcome = match string_geodesics_cli::run(&cli.command) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    if let Err(e) = emit(out.as_deref(), &outcome.document) {
        if matches!(&e, CliError::Io(io) if io.kind() == std::io::ErrorKind::BrokenPipe) {
            return ExitCode::SUCCESS;
        }
        eprintln!("error: writing output: {e}");
        return ExitCode::from(3);
    }
    // the summary must not mix into a document written to stdout
    for line in &outcome.summary {
        if out.is_some() {
            println!("{line}");
        } else {
            eprintln!("{line}");
        }
    }
    match outcome.failed {
        Some(code) => ExitCode::from(code),
        None => ExitCode::SUCCESS,
    }
}
