use std::path::PathBuf;

use clap::Args;
use espd_core::tables::{compare_table, golden_table, CellComparison};
use espd_core::IntermediateForm;

use crate::failure::{Failure, EXIT_COMPUTE, EXIT_OK};
use crate::output::{csv_bytes, emit, num, sink, Io};

#[derive(Debug, Args)]
pub struct TablesArgs {
    /// Reference table to regenerate.
    #[arg(long, value_parser = clap::value_parser!(u8).range(2..=7))]
    pub table: u8,
    /// Use the first-order intermediate probabilities instead of the exact ones.
    #[arg(long)]
    pub approx: bool,
    /// Output CSV path.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

const HEADER: [&str; 13] = [
    "table",
    "series",
    "level",
    "n",
    "k",
    "de",
    "dcr",
    "printed_de_pct",
    "printed_dcr",
    "de_delta_pp",
    "dcr_rel_delta",
    "display",
    "status",
];

/// Rounded the way the printed tables are: DE to 0.1 %, DCR to two digits.
pub fn display(de: f64, dcr: f64) -> String {
    format!("({:.1}%, {:.1e})", 100.0 * de, dcr)
}

fn row(c: &CellComparison) -> Vec<String> {
    vec![
        c.table.to_string(),
        c.series.to_string(),
        c.level.to_string(),
        c.n.to_string(),
        c.k.to_string(),
        num(c.de),
        num(c.dcr),
        c.printed_de_pct.to_string(),
        format!("{:e}", c.printed_dcr),
        num(c.de_delta_pp()),
        num(c.dcr_rel_delta()),
        display(c.de, c.dcr),
        if c.passes() { "ok" } else { "FAIL" }.to_string(),
    ]
}

pub fn run(args: TablesArgs, io: &mut Io) -> Result<u8, Failure> {
    let table = golden_table(args.table).ok_or_else(|| Failure::usage(format!("unknown table {}", args.table)))?;
    let form = if args.approx {
        IntermediateForm::Approximate
    } else {
        IntermediateForm::Exact
    };
    let cells = compare_table(table, form).map_err(Failure::during)?;

    let bytes = csv_bytes(&HEADER, cells.iter().map(row));
    emit(io, &sink(args.out, &format!("table{}.csv", table.id)), &bytes)?;

    let failed: Vec<&CellComparison> = cells.iter().filter(|c| !c.passes()).collect();
    let variant = if args.approx { "approximate" } else { "exact" };
    io.note(format_args!(
        "table {} ({variant} intermediates): {}/{} cells within tolerance",
        table.id,
        cells.len() - failed.len(),
        cells.len()
    ));
    for c in &failed {
        io.note(format_args!(
            "  {} level {}: computed {} printed ({}%, {:e}); delta {:+.3} pp, {:+.1}% dcr",
            c.series,
            c.level,
            display(c.de, c.dcr),
            c.printed_de_pct,
            c.printed_dcr,
            c.de_delta_pp(),
            100.0 * c.dcr_rel_delta()
        ));
    }
    Ok(if failed.is_empty() { EXIT_OK } else { EXIT_COMPUTE })
}
