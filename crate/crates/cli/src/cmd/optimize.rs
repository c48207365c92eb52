use std::path::PathBuf;

use clap::{Args, ValueEnum};
use espd_core::optimize::{pareto_front, search_schedules, KRule, OptimizationQuery, DEFAULT_TOP};

use crate::cmd::ModelArgs;
use crate::failure::{Failure, EXIT_OK};
use crate::output::{csv_bytes, emit, num, sink, Io};

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum KRuleArg {
    Free,
    NonDecreasing,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    /// Minimum final detection efficiency.
    #[arg(long)]
    pub de_target: f64,
    /// Maximum final dark count rate.
    #[arg(long)]
    pub dcr_target: f64,
    #[arg(long, default_value_t = 4)]
    pub max_levels: usize,
    #[arg(long, default_value_t = 8)]
    pub n_max: u32,
    /// Number of ranked schedules to keep.
    #[arg(long, default_value_t = DEFAULT_TOP, conflicts_with = "all")]
    pub top: usize,
    /// Keep every feasible schedule.
    #[arg(long)]
    pub all: bool,
    #[arg(long, value_enum, default_value_t = KRuleArg::Free)]
    pub k_rule: KRuleArg,
    /// Reduce the ranked list to its cost/DE/DCR Pareto front.
    #[arg(long)]
    pub pareto: bool,
    #[command(flatten)]
    pub model: ModelArgs,
    /// Output CSV path.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(args: OptimizeArgs, io: &mut Io) -> Result<u8, Failure> {
    let (init, params) = args.model.resolve()?;
    let mut query = OptimizationQuery::new(init, params, args.de_target, args.dcr_target);
    query.max_levels = args.max_levels;
    query.n_max = args.n_max;
    query.top = if args.all { None } else { Some(args.top) };
    query.k_rule = match args.k_rule {
        KRuleArg::Free => KRule::Free,
        KRuleArg::NonDecreasing => KRule::NonDecreasing,
    };
    query.validate().map_err(Failure::invalid)?;

    let mut ranked = search_schedules(&query).map_err(Failure::during)?;
    if args.pareto {
        ranked = pareto_front(&ranked);
    }
    if ranked.is_empty() {
        io.note("no feasible schedule");
    }
    let rows = ranked.iter().map(|r| {
        vec![
            r.encoding(),
            r.cost.to_string(),
            num(r.final_perf.eta),
            num(r.final_perf.dcr),
        ]
    });
    let bytes = csv_bytes(&["schedule", "cost", "de", "dcr"], rows);
    emit(io, &sink(args.out, "schedules.csv"), &bytes)?;
    Ok(EXIT_OK)
}
