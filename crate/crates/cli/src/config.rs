//! Run configuration files.
//!
//! A config is a flat TOML document:
//!
//! ```toml
//! eta0 = 0.59          # seed detection efficiency
//! d0 = 1.0e-2          # seed dark count rate
//! p = 0.98             # signal transmission per module
//! P = 0.97             # auxiliary activation probability (alias p_act)
//! Q = 0.002            # auxiliary error floor (alias q_err)
//! schedule = [[4, 1], [4, 2]]   # (n, k) per level, last one repeats
//! max_levels = 8       # optional, defaults to the schedule length
//! out = "run.csv"      # optional output path
//! ```
//!
//! Unknown keys are rejected. Errors carry the line of the offending value.

use std::ops::Range;
use std::path::{Path, PathBuf};

use espd_core::{ComponentParams, DetectorPerformance, LevelConfig, Schedule};
use serde::Deserialize;
use toml::Spanned;

use crate::failure::Failure;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    eta0: Spanned<f64>,
    d0: Spanned<f64>,
    p: Spanned<f64>,
    #[serde(rename = "P", alias = "p_act")]
    p_act: Spanned<f64>,
    #[serde(rename = "Q", alias = "q_err")]
    q_err: Spanned<f64>,
    schedule: Spanned<Vec<Spanned<[u32; 2]>>>,
    max_levels: Option<Spanned<usize>>,
    out: Option<PathBuf>,
}

/// Values given on the command line, applied over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub eta0: Option<f64>,
    pub d0: Option<f64>,
    pub p: Option<f64>,
    pub p_act: Option<f64>,
    pub q_err: Option<f64>,
    pub levels: Option<usize>,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub init: DetectorPerformance,
    pub schedule: Schedule,
    pub levels: usize,
    pub out: Option<PathBuf>,
}

struct Located<'a> {
    path: &'a Path,
    text: &'a str,
}

impl Located<'_> {
    fn line(&self, span: Range<usize>) -> usize {
        let end = span.start.min(self.text.len());
        self.text[..end].bytes().filter(|&b| b == b'\n').count() + 1
    }

    fn at(&self, span: Range<usize>, message: impl std::fmt::Display) -> Failure {
        Failure::usage(format!("{}:{}: {message}", self.path.display(), self.line(span)))
    }

    /// File value unless a flag overrides it; either way checked against `[0, 1]`.
    fn prob(&self, key: &str, flag: &str, file: &Spanned<f64>, over: Option<f64>) -> Result<f64, Failure> {
        let in_range = |v: f64| (0.0..=1.0).contains(&v);
        match over {
            Some(v) if in_range(v) => Ok(v),
            Some(v) => Err(Failure::usage(format!("{flag} = {v} is outside [0, 1]"))),
            None if in_range(*file.get_ref()) => Ok(*file.get_ref()),
            None => Err(self.at(file.span(), format!("{key} = {} is outside [0, 1]", file.get_ref()))),
        }
    }
}

pub fn load(path: &Path, over: &Overrides) -> Result<RunConfig, Failure> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
    parse(path, &text, over)
}

pub fn parse(path: &Path, text: &str, over: &Overrides) -> Result<RunConfig, Failure> {
    let loc = Located { path, text };
    let raw: RawConfig = toml::from_str(text).map_err(|e| match e.span() {
        Some(span) => loc.at(span, e.message()),
        None => Failure::usage(format!("{}: {}", path.display(), e.message())),
    })?;

    let eta0 = loc.prob("eta0", "--eta0", &raw.eta0, over.eta0)?;
    let d0 = loc.prob("d0", "--d0", &raw.d0, over.d0)?;
    let p = loc.prob("p", "--p", &raw.p, over.p)?;
    let p_act = loc.prob("P", "--p-act", &raw.p_act, over.p_act)?;
    let q_err = loc.prob("Q", "--q-err", &raw.q_err, over.q_err)?;
    let init = DetectorPerformance::new(eta0, d0).map_err(Failure::invalid)?;
    let params = ComponentParams::new(p, p_act, q_err).map_err(Failure::invalid)?;

    if raw.schedule.get_ref().is_empty() {
        return Err(loc.at(raw.schedule.span(), "schedule has no levels"));
    }
    let levels = raw
        .schedule
        .get_ref()
        .iter()
        .map(|entry| {
            let [n, k] = *entry.get_ref();
            LevelConfig::new(n, k).map_err(|e| loc.at(entry.span(), e))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let schedule = Schedule::new(params, levels).map_err(Failure::invalid)?;

    let levels = match (over.levels, &raw.max_levels) {
        (Some(0), _) => return Err(Failure::usage("--levels must be at least 1")),
        (Some(l), _) => l,
        (None, Some(m)) if *m.get_ref() == 0 => return Err(loc.at(m.span(), "max_levels must be at least 1")),
        (None, Some(m)) => *m.get_ref(),
        (None, None) => schedule.len(),
    };

    Ok(RunConfig {
        init,
        schedule,
        levels,
        out: over.out.clone().or(raw.out),
    })
}
