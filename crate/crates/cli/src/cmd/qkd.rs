use clap::Args;
use espd_core::qkd::{approximation_gap, gamma_approx, gamma_exact, QkdScenario};
use espd_core::DetectorPerformance;

use crate::failure::{Failure, EXIT_OK};
use crate::output::{emit, Io, Sink};

#[derive(Debug, Args)]
pub struct QkdArgs {
    /// Secure QBER threshold.
    #[arg(long)]
    pub e_th: f64,
    /// QBER without detector contributions.
    #[arg(long)]
    pub e_c: f64,
    /// Error rate of dark-count clicks; defaults to the threshold.
    #[arg(long)]
    pub e: Option<f64>,
    /// Detection efficiency.
    #[arg(long)]
    pub eta: f64,
    /// Dark count rate.
    #[arg(long)]
    pub dcr: f64,
    /// List the small-dark-count form first.
    #[arg(long)]
    pub approx: bool,
}

pub fn run(args: QkdArgs, io: &mut Io) -> Result<u8, Failure> {
    let scn = QkdScenario::with_e(args.e_th, args.e_c, args.e.unwrap_or(args.e_th)).map_err(Failure::invalid)?;
    let det = DetectorPerformance::new(args.eta, args.dcr).map_err(Failure::invalid)?;
    let exact = gamma_exact(&scn, &det).map_err(Failure::invalid)?;
    let approx = gamma_approx(&scn, &det).map_err(Failure::invalid)?;

    let exact_line = format!("gamma_exact  = {exact} ({exact:.6e})");
    let approx_line = format!("gamma_approx = {approx} ({approx:.6e})");
    let (first, second) = if args.approx {
        (approx_line, exact_line)
    } else {
        (exact_line, approx_line)
    };
    let text = format!(
        "e_assumed    = {}{}\n{first}\n{second}\nrel_gap      = {:.6e}\n",
        scn.e,
        if args.e.is_none() { " (= e_th)" } else { "" },
        approximation_gap(&scn, &det)
    );
    emit(io, &Sink::Stdout, text.as_bytes())?;
    Ok(EXIT_OK)
}
