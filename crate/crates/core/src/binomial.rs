//! Binomial coefficients, probability mass functions and upper tails.
//!
//! Tails are summed directly over their terms (never as `1 - cdf`) with the
//! smallest terms first, so tiny tail probabilities keep full relative
//! precision. `0^0` is taken as 1 throughout.

/// `C(n, k)` as a float. Exact (integer arithmetic) while the running
/// product fits in `u128`, which covers every `n` the crate accepts.
pub fn choose(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        match acc.checked_mul(u128::from(n - i)) {
            Some(v) => acc = v / u128::from(i + 1),
            None => return choose_float(n, k),
        }
    }
    acc as f64
}

fn choose_float(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * f64::from(n - i) / f64::from(i + 1))
}

/// Writes the Binomial(n, x) pmf into `out[0..=n]`.
pub fn binomial_pmf_into(n: u32, x: f64, out: &mut [f64]) {
    let n_us = n as usize;
    debug_assert!(out.len() > n_us);
    if x <= 0.0 {
        out[..=n_us].fill(0.0);
        out[0] = 1.0;
        return;
    }
    if x >= 1.0 {
        out[..=n_us].fill(0.0);
        out[n_us] = 1.0;
        return;
    }
    let y = 1.0 - x;
    for j in 0..=n {
        out[j as usize] = choose(n, j) * x.powi(j as i32) * y.powi((n - j) as i32);
    }
}

pub fn binomial_pmf(n: u32, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; n as usize + 1];
    binomial_pmf_into(n, x, &mut out);
    out
}

/// Longest pmf the stack buffers hold: a sum of two binomials with `n <= 64` in total.
const BUF: usize = 65;

/// Sums non-negative terms smallest first.
pub fn sum_ascending(terms: &[f64]) -> f64 {
    if terms.len() <= BUF {
        let mut buf = [0.0f64; BUF];
        let buf = &mut buf[..terms.len()];
        buf.copy_from_slice(terms);
        buf.sort_unstable_by(f64::total_cmp);
        buf.iter().sum()
    } else {
        let mut buf = terms.to_vec();
        buf.sort_unstable_by(f64::total_cmp);
        buf.iter().sum()
    }
}

/// `sum_{j >= m} pmf[j]`; 1 for `m <= 0`, 0 past the support.
pub fn pmf_upper_tail(pmf: &[f64], m: i64) -> f64 {
    if m <= 0 {
        return 1.0;
    }
    let m = m as usize;
    if m >= pmf.len() {
        return 0.0;
    }
    sum_ascending(&pmf[m..]).min(1.0)
}

/// `P[Binomial(n, x) >= m]`.
pub fn upper_tail(n: u32, x: f64, m: i64) -> f64 {
    if m <= 0 {
        return 1.0;
    }
    if m > i64::from(n) {
        return 0.0;
    }
    if (n as usize) < BUF {
        let mut buf = [0.0f64; BUF];
        binomial_pmf_into(n, x, &mut buf);
        pmf_upper_tail(&buf[..=n as usize], m)
    } else {
        pmf_upper_tail(&binomial_pmf(n, x), m)
    }
}

fn convolve_into(a: &[f64], b: &[f64], out: &mut [f64]) {
    out[..a.len() + b.len() - 1].fill(0.0);
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0.0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
}

/// Pmf of `Binomial(n1, x1) + Binomial(n2, x2)` (independent), length `n1 + n2 + 1`.
pub fn convolved_pmf(n1: u32, x1: f64, n2: u32, x2: f64) -> Vec<f64> {
    let a = binomial_pmf(n1, x1);
    let b = binomial_pmf(n2, x2);
    let mut out = vec![0.0; a.len() + b.len() - 1];
    convolve_into(&a, &b, &mut out);
    out
}

/// `P[Binomial(n1, x1) + Binomial(n2, x2) >= m]`.
pub fn convolved_upper_tail(n1: u32, x1: f64, n2: u32, x2: f64, m: i64) -> f64 {
    if m <= 0 {
        return 1.0;
    }
    let total = (n1 + n2) as usize;
    if total >= BUF {
        return pmf_upper_tail(&convolved_pmf(n1, x1, n2, x2), m);
    }
    let (mut a, mut b, mut out) = ([0.0f64; BUF], [0.0f64; BUF], [0.0f64; BUF]);
    binomial_pmf_into(n1, x1, &mut a);
    binomial_pmf_into(n2, x2, &mut b);
    convolve_into(&a[..=n1 as usize], &b[..=n2 as usize], &mut out);
    pmf_upper_tail(&out[..=total], m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn choose_small_values() {
        assert_eq!(choose(0, 0), 1.0);
        assert_eq!(choose(6, 3), 20.0);
        assert_eq!(choose(8, 4), 70.0);
        assert_eq!(choose(5, 7), 0.0);
        assert_eq!(choose(64, 32), 1_832_624_140_942_590_534u64 as f64);
    }

    #[test]
    fn choose_matches_pascal_rule() {
        for n in 1..=64u32 {
            for k in 1..n {
                let lhs = choose(n, k);
                let rhs = choose(n - 1, k - 1) + choose(n - 1, k);
                assert!((lhs - rhs).abs() <= lhs * 1e-15, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn degenerate_success_probabilities() {
        assert_eq!(binomial_pmf(4, 0.0), vec![1.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(binomial_pmf(3, 1.0), vec![0.0, 0.0, 0.0, 1.0]);
        assert_eq!(upper_tail(4, 0.0, 1), 0.0);
        assert_eq!(upper_tail(4, 1.0, 4), 1.0);
        assert_eq!(upper_tail(0, 0.3, 0), 1.0);
    }

    #[test]
    fn tail_sums_pmf() {
        let pmf = binomial_pmf(7, 0.3);
        assert!((pmf.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        // P[X >= 6] = 7 * .3^6 * .7 + .3^7
        let expected = 7.0 * 0.3f64.powi(6) * 0.7 + 0.3f64.powi(7);
        assert!((upper_tail(7, 0.3, 6) - expected).abs() < 1e-18);
    }

    #[test]
    fn convolution_reduces_to_binomial_for_equal_rates() {
        let conv = convolved_pmf(3, 0.4, 5, 0.4);
        let direct = binomial_pmf(8, 0.4);
        for (a, b) in conv.iter().zip(&direct) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn small_tail_keeps_relative_precision() {
        let t = upper_tail(8, 1e-3, 8);
        assert!((t / 1e-24 - 1.0).abs() < 1e-12);
    }
}
