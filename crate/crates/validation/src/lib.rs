//! Acceptance criteria for the workspace. Each check runs at its stated
//! tolerance and returns a verdict with a one-line summary; the `acceptance`
//! test target prints them and fails if any does.

use std::time::{Duration, Instant};

use espd_cli::Io;
use espd_core::bounds::{dcr_upper_bound, de_gain, decision_poly, find_fixed_points, ROOT_TOL};
use espd_core::dynamics::{de_survive_case, level_dcr, level_de, level_intermediates};
use espd_core::oracle::{enumerate_level, oracle_report};
use espd_core::qkd::{approximation_gap, gamma_approx, gamma_exact, QkdScenario};
use espd_core::tables::{compare_table, golden_table, CellComparison};
use espd_core::{level_map, ComponentParams, DetectorPerformance, IntermediateForm, LevelConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Verdict {
    pub pass: bool,
    pub detail: String,
}

pub struct Criterion {
    pub id: u32,
    pub title: &'static str,
    /// Wall-clock budget, counted against the verdict.
    pub limit: Option<Duration>,
    pub check: fn() -> Verdict,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

/// Runs one criterion, failing it if it overruns its budget.
pub fn evaluate(c: &Criterion) -> (Verdict, Duration) {
    let start = Instant::now();
    let mut v = (c.check)();
    let elapsed = start.elapsed();
    if let Some(limit) = c.limit {
        if elapsed >= limit {
            v.pass = false;
            v.detail.push_str(&format!("; exceeded {limit:?}"));
        }
    }
    (v, elapsed)
}

fn rng(stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    r.set_stream(stream);
    r
}

fn random_config(r: &mut ChaCha8Rng, n_max: u32) -> LevelConfig {
    let n = r.random_range(1..=n_max);
    LevelConfig::new(n, r.random_range(1..=n)).unwrap()
}

fn random_model(r: &mut ChaCha8Rng) -> (DetectorPerformance, ComponentParams) {
    let det = DetectorPerformance::new(r.random(), r.random()).unwrap();
    let params = ComponentParams::new(r.random(), r.random(), r.random()).unwrap();
    (det, params)
}

fn cells(id: u8, form: IntermediateForm) -> Vec<CellComparison> {
    compare_table(golden_table(id).unwrap(), form).unwrap()
}

fn describe_misses(cells: &[CellComparison]) -> String {
    let misses: Vec<String> = cells
        .iter()
        .filter(|c| !c.passes())
        .map(|c| {
            format!(
                "T{} {} L{} computed ({:.2}%, {:.2e}) printed ({}%, {:e})",
                c.table,
                c.series,
                c.level,
                100.0 * c.de,
                c.dcr,
                c.printed_de_pct,
                c.printed_dcr
            )
        })
        .collect();
    let ok = cells.len() - misses.len();
    if misses.is_empty() {
        format!("{ok}/{} cells within tolerance", cells.len())
    } else {
        format!(
            "{ok}/{} cells within tolerance; out: {}",
            cells.len(),
            misses.join(", ")
        )
    }
}

pub fn table_two() -> Verdict {
    let c = cells(2, IntermediateForm::Exact);
    let spot = c.iter().find(|c| c.series == "Para 3" && c.level == 3).unwrap();
    let pass = c.len() == 24 && c.iter().all(CellComparison::passes);
    verdict(
        pass,
        format!(
            "{}; Para 3 level 3 ({:.1}%, {:.1e})",
            describe_misses(&c),
            100.0 * spot.de,
            spot.dcr
        ),
    )
}

pub fn table_three() -> Verdict {
    let c = cells(3, IntermediateForm::Exact);
    let stable: Vec<String> = c
        .iter()
        .filter(|c| c.level == 8)
        .map(|c| {
            format!(
                "({:.1}%, {:.1e}){}",
                100.0 * c.de,
                c.dcr,
                if c.passes() { "" } else { "!" }
            )
        })
        .collect();
    let pass = c.iter().all(CellComparison::passes);
    verdict(
        pass,
        format!("{}; stable points {}", describe_misses(&c), stable.join(" ")),
    )
}

pub fn tables_four_to_seven() -> Verdict {
    let run = |form| -> Vec<CellComparison> { (4..=7).flat_map(|id| cells(id, form)).collect() };
    let exact = run(IntermediateForm::Exact);
    let approx = run(IntermediateForm::Approximate);
    let exact_ok = exact.iter().all(CellComparison::passes);
    let approx_ok = approx.iter().all(CellComparison::passes);
    let approx_misses = approx.iter().filter(|c| !c.passes()).count();
    let matched = match (exact_ok, approx_ok) {
        (true, _) => "exact variant matches all tables",
        (false, true) => "approximate variant matches all tables",
        (false, false) => "neither variant matches all tables",
    };
    verdict(
        exact_ok || approx_ok,
        format!(
            "{matched}; exact: {}; approximate: {}/{} cells within tolerance",
            describe_misses(&exact),
            approx.len() - approx_misses,
            approx.len()
        ),
    )
}

pub fn oracle_equivalence() -> Verdict {
    let mut r = rng(4);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let (det, params) = random_model(&mut r);
        let cfg = random_config(&mut r, 12);
        let closed = level_map(det, params, cfg).unwrap();
        let (de, dcr) = enumerate_level(det, params, cfg).unwrap();
        worst = worst.max((closed.eta - de).abs()).max((closed.dcr - dcr).abs());
    }
    verdict(
        worst <= 1e-12,
        format!("1000 draws, max |closed - enumerated| = {worst:.3e}"),
    )
}

pub fn monte_carlo() -> Verdict {
    let mut r = rng(5);
    let master: u64 = 0x00c0_ffee;
    let total = 200;
    let mut agree = 0;
    for i in 0..total {
        let (det, params) = random_model(&mut r);
        let cfg = random_config(&mut r, 12);
        let report = oracle_report(det, params, cfg, 100_000, master.wrapping_add(i)).unwrap();
        agree += usize::from(report.mc_agrees());
    }
    let frac = agree as f64 / total as f64;
    verdict(
        frac >= 0.99,
        format!("{agree}/{total} configurations within 5 stderr at 1e5 trials"),
    )
}

pub fn decision_poly_monotone() -> Verdict {
    let mut r = rng(6);
    let mut worst_step = f64::INFINITY;
    for _ in 0..500 {
        let a: f64 = r.random();
        let cfg = random_config(&mut r, 64);
        let (n, k) = (cfg.n(), cfg.k());
        let top = f64::from(k - 1) / f64::from(n);
        let mut prev = decision_poly(a, n, k, 0.0).unwrap();
        for i in 1..1000 {
            let y = decision_poly(a, n, k, top * f64::from(i) / 999.0).unwrap();
            worst_step = worst_step.min(y - prev);
            prev = y;
        }
    }
    verdict(
        worst_step >= -1e-12,
        format!("500 triples x 1000 points, most negative step {worst_step:.3e}"),
    )
}

pub fn bound_suite() -> Verdict {
    let mut r = rng(7);
    let (mut covered, mut dcr_bad, mut de_bad) = (0, 0, 0);
    for _ in 0..10_000 {
        let d = 10f64.powf(r.random_range(-8.0..0.0));
        let q = 10f64.powf(r.random_range(-8.0..0.0));
        let det = DetectorPerformance::new(r.random(), d).unwrap();
        let params = ComponentParams::new(r.random(), r.random(), q).unwrap();
        let cfg = random_config(&mut r, 16);
        if let Ok(bound) = dcr_upper_bound(d, q, cfg.n(), cfg.k()) {
            covered += 1;
            dcr_bad += usize::from(bound < level_dcr(det, params, cfg).unwrap());
        }
        let inter = level_intermediates(det, params).unwrap();
        let lower = params.p.powi(cfg.n() as i32) * de_survive_case(&inter, cfg).unwrap();
        de_bad += usize::from(lower > level_de(det, params, cfg).unwrap());
    }
    verdict(
        covered > 0 && dcr_bad == 0 && de_bad == 0,
        format!("10000 points; dcr bound applicable at {covered}, violated {dcr_bad}; survival term above DE {de_bad}"),
    )
}

pub fn fixed_points() -> Verdict {
    let mut r = rng(8);
    let (mut roots, mut worst) = (0usize, 0.0f64);
    for _ in 0..300 {
        let (p, pa) = (r.random_range(0.5..=1.0), r.random_range(0.3..=1.0));
        let cfg = random_config(&mut r, 12);
        for x in find_fixed_points(p, pa, cfg.n(), cfg.k(), 2000).unwrap().roots {
            roots += 1;
            worst = worst.max(de_gain(x, p, pa, cfg.n(), cfg.k()).unwrap().abs());
        }
    }
    let anchor = find_fixed_points(0.98, 0.97, 4, 2, 10_000).unwrap().roots;
    for &x in &anchor {
        worst = worst.max(de_gain(x, 0.98, 0.97, 4, 2).unwrap().abs());
    }
    let high = anchor.iter().copied().find(|&x| x > 0.9 && x < 1.0);
    verdict(
        worst <= ROOT_TOL && high.is_some(),
        format!(
            "{} roots, max |gain| {worst:.3e}; (0.98, 0.97, 4, 2) roots {:?}",
            roots + anchor.len(),
            anchor.iter().map(|x| format!("{x:.6}")).collect::<Vec<_>>()
        ),
    )
}

pub fn qkd() -> Verdict {
    let mut r = rng(9);
    let (mut checked, mut over, mut worst_excess) = (0, 0, f64::NEG_INFINITY);
    for _ in 0..5000 {
        let e_th = r.random_range(0.01..=0.5);
        let e_c = r.random_range(0.0..e_th);
        let e = if r.random_bool(0.5) {
            e_th
        } else {
            r.random_range(0.0..=0.5)
        };
        let scn = QkdScenario::with_e(e_th, e_c, e).unwrap();
        let det =
            DetectorPerformance::new(r.random_range(0.01..=1.0), 10f64.powf(r.random_range(-12.0..-2.0))).unwrap();
        let exact = gamma_exact(&scn, &det).unwrap();
        let approx = gamma_approx(&scn, &det).unwrap();
        let gap = approximation_gap(&scn, &det);
        checked += 1;
        if exact > 0.0 && gap > 0.0 {
            let rel = (exact - approx).abs() / exact;
            worst_excess = worst_excess.max(rel - gap);
            // the two forms differ by exactly `gap` relative; the subtraction
            // resolves that difference only to a few machine epsilons
            over += usize::from(rel > gap + 8.0 * f64::EPSILON);
        }
    }
    let scn = QkdScenario::new(0.11, 0.02).unwrap();
    let zero = DetectorPerformance::new(0.934, 0.0).unwrap();
    let zero_ok = gamma_exact(&scn, &zero).unwrap() == 0.0 && gamma_approx(&scn, &zero).unwrap() == 0.0;
    verdict(
        over == 0 && zero_ok,
        format!(
            "{checked} points, {over} beyond bound, max (rel - bound) {worst_excess:.3e}; gamma(d=0) == 0: {zero_ok}"
        ),
    )
}

fn espd(args: &[&str]) -> (u8, Vec<u8>) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = espd_cli::run(
        std::iter::once("espd").chain(args.iter().copied()),
        &mut Io {
            out: &mut out,
            err: &mut err,
        },
    );
    (code, out)
}

pub fn determinism() -> Verdict {
    let dir = tempfile::tempdir().expect("temp dir");
    let config = dir.path().join("run.toml");
    std::fs::write(
        &config,
        "eta0 = 0.59\nd0 = 1e-2\np = 0.98\nP = 0.97\nQ = 0.002\nschedule = [[8, 1], [8, 4]]\nmax_levels = 8\n",
    )
    .expect("write config");
    let config = config.to_str().expect("utf-8 temp path");
    let commands: [(&str, Vec<&str>); 3] = [
        ("iterate", vec!["iterate", config]),
        (
            "oracle",
            vec!["oracle", "--n", "6", "--k", "2", "--trials", "200000", "--seed", "42"],
        ),
        (
            "optimize",
            vec![
                "optimize",
                "--de-target",
                "0.93",
                "--dcr-target",
                "1e-9",
                "--max-levels",
                "4",
                "--n-max",
                "8",
            ],
        ),
    ];
    let mut notes = Vec::new();
    let mut pass = true;
    for (name, args) in &commands {
        let runs: Vec<(u8, Vec<u8>)> = [None, None, Some("1"), Some("4")]
            .iter()
            .map(|threads| match threads {
                Some(t) => espd(&[&["--threads", t][..], args].concat()),
                None => espd(args),
            })
            .collect();
        let same = runs.iter().all(|r| r == &runs[0]);
        let ok = same && runs[0].0 == 0 && !runs[0].1.is_empty();
        pass &= ok;
        notes.push(format!("{name} {}", if ok { "identical" } else { "DIFFERS" }));
    }
    verdict(
        pass,
        format!("{} (2 default runs, --threads 1, --threads 4)", notes.join(", ")),
    )
}

const fn secs(s: u64) -> Option<Duration> {
    Some(Duration::from_secs(s))
}

pub const CRITERIA: [Criterion; 10] = [
    Criterion {
        id: 1,
        title: "golden table 2",
        limit: secs(1),
        check: table_two,
    },
    Criterion {
        id: 2,
        title: "golden table 3",
        limit: secs(1),
        check: table_three,
    },
    Criterion {
        id: 3,
        title: "golden tables 4-7",
        limit: None,
        check: tables_four_to_seven,
    },
    Criterion {
        id: 4,
        title: "oracle equivalence",
        limit: secs(30),
        check: oracle_equivalence,
    },
    Criterion {
        id: 5,
        title: "Monte Carlo consistency",
        limit: secs(60),
        check: monte_carlo,
    },
    Criterion {
        id: 6,
        title: "decision polynomial monotonicity",
        limit: None,
        check: decision_poly_monotone,
    },
    Criterion {
        id: 7,
        title: "bound suite",
        limit: None,
        check: bound_suite,
    },
    Criterion {
        id: 8,
        title: "fixed-point self-consistency",
        limit: None,
        check: fixed_points,
    },
    Criterion {
        id: 9,
        title: "QKD gamma forms",
        limit: None,
        check: qkd,
    },
    Criterion {
        id: 10,
        title: "determinism",
        limit: None,
        check: determinism,
    },
];
