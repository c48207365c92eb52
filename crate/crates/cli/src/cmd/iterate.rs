use std::path::PathBuf;

use clap::Args;
use espd_core::{iterate_schedule, ConvergenceRule};

use crate::config::{self, Overrides};
use crate::failure::{Failure, EXIT_OK};
use crate::output::{csv_bytes, emit, num, sink, Io};

#[derive(Debug, Args)]
pub struct IterateArgs {
    /// Run configuration (TOML).
    pub config: PathBuf,
    /// Number of levels; the last schedule entry repeats past its end.
    #[arg(long)]
    pub levels: Option<usize>,
    /// Output CSV path.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Override the seed detection efficiency.
    #[arg(long)]
    pub eta0: Option<f64>,
    /// Override the seed dark count rate.
    #[arg(long)]
    pub d0: Option<f64>,
    /// Override the signal transmission.
    #[arg(long)]
    pub p: Option<f64>,
    /// Override the auxiliary activation probability.
    #[arg(long)]
    pub p_act: Option<f64>,
    /// Override the auxiliary error floor.
    #[arg(long)]
    pub q_err: Option<f64>,
}

pub fn run(args: IterateArgs, io: &mut Io) -> Result<u8, Failure> {
    let over = Overrides {
        eta0: args.eta0,
        d0: args.d0,
        p: args.p,
        p_act: args.p_act,
        q_err: args.q_err,
        levels: args.levels,
        out: args.out,
    };
    let cfg = config::load(&args.config, &over)?;
    let traj = iterate_schedule(cfg.init, &cfg.schedule, ConvergenceRule::fixed_levels(cfg.levels))
        .map_err(Failure::during)?;

    let rows = traj.points.iter().map(|pt| {
        let (n, k) = pt.config.map_or((String::new(), String::new()), |c| {
            (c.n().to_string(), c.k().to_string())
        });
        vec![pt.level.to_string(), n, k, num(pt.perf.eta), num(pt.perf.dcr)]
    });
    let bytes = csv_bytes(&["level", "n", "k", "de", "dcr"], rows);
    emit(io, &sink(cfg.out, "trajectory.csv"), &bytes)?;
    Ok(EXIT_OK)
}
