//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 numerical
//! failure, 3 regime failure under `--strict`. Data goes to stdout;
//! warnings and errors go to stderr.

mod commands;
pub mod config;
pub mod output;

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand};

pub use commands::{random_system, Report};
use config::{is_numerical, read_config_file, Options, RunConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_REGIME: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "raman", version, about = "Effective two-level dynamics of multilevel Raman transitions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    options: Options,
}

#[derive(Clone, Copy, Debug, Subcommand)]
enum Command {
    /// Geometric factors per lower-state mF.
    Table,
    /// Effective coupling and lightshift per mF (or coupling profiles with --profiles).
    Spectrum,
    /// Ground-state populations of one pair over time.
    Evolve,
    /// Check the far-detuned regime conditions.
    Validate,
    /// Analytic against numerical eigenvalues of the Raman Hamiltonian.
    Eigs,
}

/// Run the command line `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    let options = match &cli.options.config {
        Some(path) => match read_config_file(path) {
            Ok(file) => cli.options.merged_over(file),
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                return EXIT_USAGE;
            }
        },
        None => cli.options,
    };
    let cfg = match RunConfig::resolve(options) {
        Ok(cfg) => cfg,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let result = match cli.command {
        Command::Table => commands::table(&cfg),
        Command::Spectrum => commands::spectrum_cmd(&cfg),
        Command::Evolve => commands::evolve(&cfg),
        Command::Validate => commands::validate(&cfg),
        Command::Eigs => commands::eigs(&cfg),
    };
    let report = match result {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return if is_numerical(&e) { EXIT_NUMERICAL } else { EXIT_USAGE };
        }
    };
    for w in &report.warnings {
        let _ = writeln!(err, "warning: {w}");
    }
    let strict_failure = cfg.strict && report.regime_failed;
    // validate is a report; other commands withhold data that failed the regime check
    if !strict_failure || matches!(cli.command, Command::Validate) {
        if let Err(e) = report.table.write(cfg.format, out) {
            let _ = writeln!(err, "error: cannot write output: {e}");
            return EXIT_USAGE;
        }
    }
    if strict_failure {
        let _ = writeln!(err, "error: regime check failed under --strict");
        return EXIT_REGIME;
    }
    EXIT_OK
}
