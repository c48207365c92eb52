//! Closed-form bounds on the level map and the fixed-point condition for
//! the detection efficiency under a constant `(n, k)`.
//!
//! Everything here uses the first-order intermediates (`P*eta`, `Q + d`),
//! so the DE bound is an approximate lower bound, not a proven one.

use crate::binomial::{choose, upper_tail};
use crate::error::{check_prob, check_range, EspdError, Result};

fn check_nk(n: u32, k: u32) -> Result<()> {
    if n == 0 || k == 0 || k > n {
        return Err(EspdError::LevelConfig {
            n,
            k,
            reason: "requires 1 <= k <= n",
        });
    }
    Ok(())
}

/// `f(x) = a C(n,k-1) x^(k-1) (1-x)^(n-k+1) + sum_{j>=k} C(n,j) x^j (1-x)^(n-j)`.
///
/// Non-decreasing in `x` on `[0, (k-1)/n]` for any `a >= 0`.
pub fn decision_poly(a: f64, n: u32, k: u32, x: f64) -> Result<f64> {
    check_range("a", a, 0.0, f64::INFINITY)?;
    check_nk(n, k)?;
    check_prob("x", x)?;
    let edge = choose(n, k - 1) * x.powi(k as i32 - 1) * (1.0 - x).powi((n - k + 1) as i32);
    Ok(a * edge + upper_tail(n, x, k.into()))
}

/// Upper bound on the next-level dark count rate, independent of the
/// current efficiency and of `P`.
///
/// Only established where `k - 1 >= n (Q + d_s)`; outside that region this
/// returns [`EspdError::Precondition`].
pub fn dcr_upper_bound(d_s: f64, q: f64, n: u32, k: u32) -> Result<f64> {
    check_prob("d_s", d_s)?;
    check_prob("Q", q)?;
    check_nk(n, k)?;
    let x = q + d_s;
    if x > 1.0 {
        return Err(EspdError::Precondition(format!("Q + d_s = {x} exceeds 1")));
    }
    if f64::from(k - 1) < f64::from(n) * x {
        return Err(EspdError::Precondition(format!(
            "k - 1 = {} < n (Q + d_s) = {}",
            k - 1,
            f64::from(n) * x
        )));
    }
    decision_poly(d_s, n, k, x)
}

/// Leading-order estimate `(Q+d)^(k-1) [d C(n,k-1) + C(n,k) (Q+d)]`, meaningful
/// when `C(n,j) (Q+d) << 1`.
pub fn dcr_estimate(d_s: f64, q: f64, n: u32, k: u32) -> Result<f64> {
    check_prob("d_s", d_s)?;
    check_prob("Q", q)?;
    check_nk(n, k)?;
    let x = q + d_s;
    Ok(x.powi(k as i32 - 1) * (d_s * choose(n, k - 1) + choose(n, k) * x))
}

/// Approximate lower bound `p^n f(P eta)` with `a = eta` on the next-level efficiency.
pub fn de_lower_bound(eta_s: f64, p: f64, p_act: f64, n: u32, k: u32) -> Result<f64> {
    check_prob("eta_s", eta_s)?;
    check_prob("p", p)?;
    check_prob("P", p_act)?;
    Ok(p.powi(n as i32) * decision_poly(eta_s, n, k, p_act * eta_s)?)
}

/// Enhancement gain `lower_bound(x) - x`; positive where a level raises the
/// efficiency, zero at candidate fixed points.
pub fn de_gain(x: f64, p: f64, p_act: f64, n: u32, k: u32) -> Result<f64> {
    check_prob("x", x)?;
    check_prob("p", p)?;
    check_prob("P", p_act)?;
    check_nk(n, k)?;
    let px = p_act * x;
    let rest = 1.0 - px;
    let mut bracket = x * choose(n, k - 1) * rest.powi((n - k + 1) as i32);
    for j in k..=n {
        bracket += choose(n, j) * px.powi((j - k + 1) as i32) * rest.powi((n - j) as i32);
    }
    Ok(p.powi(n as i32) * px.powi(k as i32 - 1) * bracket - x)
}

/// Roots of [`de_gain`] on `(0, 1]` plus the widest interval where it is positive.
#[derive(Debug, Clone, PartialEq)]
pub struct FixedPointReport {
    pub roots: Vec<f64>,
    pub gain_positive_interval: Option<(f64, f64)>,
}

/// Bound on `|de_gain|` at every returned root.
pub const ROOT_TOL: f64 = 1e-10;
const DEDUP_TOL: f64 = 1e-9;

/// Scans `grid` uniform points over `(0, 1]` and bisects every sign change.
pub fn find_fixed_points(p: f64, p_act: f64, n: u32, k: u32, grid: usize) -> Result<FixedPointReport> {
    check_prob("p", p)?;
    check_prob("P", p_act)?;
    check_nk(n, k)?;
    if grid < 100 {
        return Err(EspdError::Precondition(format!("grid = {grid} < 100")));
    }
    let gain = |x: f64| de_gain(x, p, p_act, n, k).expect("validated inputs");
    let xs: Vec<f64> = (1..=grid).map(|i| i as f64 / grid as f64).collect();
    let gs: Vec<f64> = xs.iter().map(|&x| gain(x)).collect();

    let mut roots = Vec::new();
    for i in 0..xs.len() {
        if gs[i] == 0.0 {
            roots.push(xs[i]);
            continue;
        }
        if i + 1 < xs.len() && gs[i + 1] != 0.0 && (gs[i] < 0.0) != (gs[i + 1] < 0.0) {
            roots.push(bisect(&gain, xs[i], xs[i + 1], gs[i]));
        }
    }
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|b, a| (*b - *a).abs() <= DEDUP_TOL);

    Ok(FixedPointReport {
        roots,
        gain_positive_interval: widest_positive_run(&xs, &gs),
    })
}

fn bisect(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, mut f_lo: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    if f(lo).abs() <= f(hi).abs() {
        lo
    } else {
        hi
    }
}

fn widest_positive_run(xs: &[f64], gs: &[f64]) -> Option<(f64, f64)> {
    let mut best: Option<(f64, f64)> = None;
    let mut start: Option<usize> = None;
    for i in 0..=gs.len() {
        let positive = i < gs.len() && gs[i] > 0.0;
        match (positive, start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                let run = (xs[s], xs[i - 1]);
                if best.is_none_or(|(lo, hi)| run.1 - run.0 > hi - lo) {
                    best = Some(run);
                }
                start = None;
            }
            _ => {}
        }
    }
    best
}
