//! Command-line front end for `espd-core`.
//!
//! [`run`] parses arguments and executes one subcommand against the given
//! output streams; the `espd` binary is a thin wrapper around it.
//!
//! Exit codes: 0 success, 1 computation or tolerance failure, 2 usage or
//! validation failure.

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand};

mod cmd;
mod config;
mod failure;
mod output;

use failure::Failure;
pub use output::{Io, OUT_DIR_VAR};

/// Recursive single-photon detector enhancement: trajectories, reference
/// tables, schedule search, oracles and QKD link budgets.
#[derive(Debug, Parser)]
#[command(name = "espd", version)]
struct Cli {
    /// Worker threads for parallel work (defaults to all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Iterate a schedule from a config file and emit the trajectory.
    Iterate(cmd::iterate::IterateArgs),
    /// Regenerate a reference table and compare with its printed values.
    Tables(cmd::tables::TablesArgs),
    /// Search per-level (n, k) schedules meeting DE/DCR targets.
    Optimize(cmd::optimize::OptimizeArgs),
    /// Cross-check one level against enumeration and Monte Carlo.
    Oracle(cmd::oracle::OracleArgs),
    /// Minimal tolerable channel transmission for a QKD link.
    Qkd(cmd::qkd::QkdArgs),
    /// Emit the data behind the trajectory figures as CSV.
    Figdata(cmd::figdata::FigdataArgs),
}

fn dispatch(command: Command, io: &mut Io) -> Result<u8, Failure> {
    match command {
        Command::Iterate(args) => cmd::iterate::run(args, io),
        Command::Tables(args) => cmd::tables::run(args, io),
        Command::Optimize(args) => cmd::optimize::run(args, io),
        Command::Oracle(args) => cmd::oracle::run(args, io),
        Command::Qkd(args) => cmd::qkd::run(args, io),
        Command::Figdata(args) => cmd::figdata::run(args, io),
    }
}

/// Runs one invocation; `args` includes the program name.
pub fn run<I, T>(args: I, io: &mut Io) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let stream: &mut dyn Write = if e.use_stderr() { &mut *io.err } else { &mut *io.out };
            let _ = write!(stream, "{}", e.render());
            return u8::try_from(e.exit_code()).unwrap_or(failure::EXIT_USAGE);
        }
    };
    let outcome = match cli.threads {
        Some(0) => Err(Failure::usage("--threads must be at least 1")),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| dispatch(cli.command, io)),
            Err(e) => Err(Failure::compute(format!("thread pool: {e}"))),
        },
        None => dispatch(cli.command, io),
    };
    match outcome {
        Ok(code) => code,
        Err(failure) => {
            io.note(format_args!("espd: {}", failure.message));
            failure.code
        }
    }
}
