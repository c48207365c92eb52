use std::fmt::Write as _;
use std::path::PathBuf;

use clap::Args;
use espd_core::oracle::{oracle_report, OracleReport, ENUM_N_MAX, ENUM_TOL, MC_SIGMAS};
use espd_core::LevelConfig;

use crate::cmd::ModelArgs;
use crate::failure::{Failure, EXIT_COMPUTE, EXIT_OK};
use crate::output::{emit, num, Io, Sink};

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long, default_value_t = 4)]
    pub n: u32,
    #[arg(long, default_value_t = 1)]
    pub k: u32,
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[command(flatten)]
    pub model: ModelArgs,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn render(r: &OracleReport, config: LevelConfig) -> String {
    let mut s = String::new();
    let mut line = |key: &str, value: String| writeln!(s, "{key:<18} {value}").expect("string write");
    line("config", config.to_string());
    line("trials", r.trials.to_string());
    line("seed", r.seed.to_string());
    line("closed_de", num(r.closed_de));
    line("closed_dcr", num(r.closed_dcr));
    line("enum_de", num(r.enum_de));
    line("enum_dcr", num(r.enum_dcr));
    line("enum_abs_err_de", num(r.enum_abs_err_de));
    line("enum_abs_err_dcr", num(r.enum_abs_err_dcr));
    line("mc_de", num(r.mc_de));
    line("mc_dcr", num(r.mc_dcr));
    line("mc_stderr_de", num(r.mc_stderr_de));
    line("mc_stderr_dcr", num(r.mc_stderr_dcr));
    line(
        "enumeration",
        format!(
            "{} (tol {ENUM_TOL:e})",
            if r.enumeration_agrees() { "agree" } else { "MISMATCH" }
        ),
    );
    line(
        "monte_carlo",
        format!(
            "{} (within {MC_SIGMAS} stderr)",
            if r.mc_agrees() { "agree" } else { "MISMATCH" }
        ),
    );
    s
}

pub fn run(args: OracleArgs, io: &mut Io) -> Result<u8, Failure> {
    if args.n > ENUM_N_MAX {
        return Err(Failure::usage(format!(
            "--n {} exceeds the enumeration limit {ENUM_N_MAX}",
            args.n
        )));
    }
    if args.trials == 0 {
        return Err(Failure::usage("--trials must be at least 1"));
    }
    let config = LevelConfig::new(args.n, args.k).map_err(Failure::invalid)?;
    let (init, params) = args.model.resolve()?;
    let report = oracle_report(init, params, config, args.trials, args.seed).map_err(Failure::during)?;

    let sink = args.out.map_or(Sink::Stdout, Sink::File);
    emit(io, &sink, render(&report, config).as_bytes())?;
    Ok(if report.enumeration_agrees() && report.mc_agrees() {
        EXIT_OK
    } else {
        EXIT_COMPUTE
    })
}
