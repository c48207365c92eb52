use std::path::PathBuf;

use clap::Args;
use espd_core::tables::{golden_table, GoldenSeries};
use espd_core::{iterate_schedule, ConvergenceRule, EspdError, Trajectory};

use crate::failure::{Failure, EXIT_OK};
use crate::output::{csv_bytes, env_out_dir, num, write_atomic, Io, OUT_DIR_VAR};

#[derive(Debug, Args)]
pub struct FigdataArgs {
    /// Figure whose trajectories to emit.
    #[arg(long, value_parser = clap::value_parser!(u8).range(2..=5))]
    pub figure: u8,
    /// Directory for the per-panel CSVs.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

/// One plotted group of series, split into a DE and a DCR panel.
struct Group {
    stem: &'static str,
    series: Vec<&'static GoldenSeries>,
}

fn table_series(id: u8) -> Vec<&'static GoldenSeries> {
    golden_table(id).map(|t| t.series.iter().collect()).unwrap_or_default()
}

fn groups(figure: u8) -> Vec<Group> {
    match figure {
        2 => vec![
            Group {
                stem: "fig2_seed59",
                series: table_series(2),
            },
            Group {
                stem: "fig2_seed27",
                series: table_series(3),
            },
        ],
        3 => vec![Group {
            stem: "fig3_p_sweep",
            series: table_series(6),
        }],
        4 => vec![
            Group {
                stem: "fig4_p_act_080",
                series: table_series(4),
            },
            Group {
                stem: "fig4_p_act_040",
                series: table_series(5),
            },
        ],
        5 => {
            // constant (8,4) from the first seed, for comparison with the varied starts
            let mut series: Vec<_> = table_series(2).into_iter().filter(|s| s.label == "Para 3").collect();
            series.extend(table_series(7));
            vec![Group {
                stem: "fig5_varied_nk",
                series,
            }]
        }
        _ => Vec::new(),
    }
}

fn trajectory(s: &GoldenSeries) -> Result<Trajectory, EspdError> {
    iterate_schedule(
        s.seed()?,
        &s.to_schedule()?,
        ConvergenceRule::fixed_levels(s.schedule.len()),
    )
}

/// `(file name, contents)` for both panels of a group.
fn panels(group: &Group) -> Result<[(String, Vec<u8>); 2], EspdError> {
    let mut de_rows = Vec::new();
    let mut dcr_rows = Vec::new();
    for s in &group.series {
        for pt in trajectory(s)?.points {
            let level = pt.level.to_string();
            de_rows.push(vec![level.clone(), s.label.to_string(), num(100.0 * pt.perf.eta)]);
            dcr_rows.push(vec![level, s.label.to_string(), num(pt.perf.dcr)]);
        }
    }
    let header = ["level", "series_label", "value"];
    Ok([
        (format!("{}_de.csv", group.stem), csv_bytes(&header, de_rows)),
        (format!("{}_dcr.csv", group.stem), csv_bytes(&header, dcr_rows)),
    ])
}

pub fn run(args: FigdataArgs, io: &mut Io) -> Result<u8, Failure> {
    let dir = args
        .out_dir
        .or_else(env_out_dir)
        .ok_or_else(|| Failure::usage(format!("no output directory: pass --out-dir or set {OUT_DIR_VAR}")))?;
    let groups = groups(args.figure);
    if groups.is_empty() {
        return Err(Failure::usage(format!("unknown figure {}", args.figure)));
    }
    let mut files = Vec::new();
    for g in &groups {
        files.extend(panels(g).map_err(Failure::during)?);
    }

    std::fs::create_dir_all(&dir).map_err(|e| Failure::compute(format!("cannot create {}: {e}", dir.display())))?;
    for (name, bytes) in &files {
        let path = dir.join(name);
        write_atomic(&path, bytes).map_err(|e| Failure::compute(format!("cannot write {}: {e}", path.display())))?;
        io.note(format_args!("wrote {}", path.display()));
    }
    Ok(EXIT_OK)
}
