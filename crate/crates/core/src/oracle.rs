//! Independent checks of one level-map evaluation.
//!
//! [`enumerate_level`] walks every loss position and every on/off pattern
//! of the `n + 1` detectors and adds up the mass of the patterns with at
//! least `k` positives. It never touches the binomial-tail algebra used by
//! [`crate::dynamics`]. Detector firing probabilities are built from the
//! device picture directly: a level-`s` detector facing a photon fires with
//! `eta + (1 - eta) d`, facing vacuum with `d`.
//!
//! [`mc_level`] samples the same events. Trials are split into fixed-size
//! blocks, each driven by its own ChaCha8 stream keyed on `(seed, block)`,
//! and block tallies are summed in block order, so results do not depend on
//! how many threads run the blocks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::dynamics::{level_map, ComponentParams, DetectorPerformance, LevelConfig};
use crate::error::{EspdError, Result};

/// Largest `n` the enumeration accepts (2^(n+1) patterns per scenario).
pub const ENUM_N_MAX: u32 = 16;

/// Trials per Monte Carlo block.
pub const MC_BLOCK: u64 = 8192;

pub const ENUM_TOL: f64 = 1e-12;
pub const MC_SIGMAS: f64 = 5.0;

/// Firing probabilities of each detector class for one level.
#[derive(Debug, Clone, Copy)]
struct FireProbs {
    aux_active: f64,
    aux_idle: f64,
    sig_photon: f64,
    sig_vacuum: f64,
}

impl FireProbs {
    fn new(det: DetectorPerformance, params: ComponentParams) -> Result<Self> {
        det.validate()?;
        params.validate()?;
        let DetectorPerformance { eta, dcr } = det;
        let on_photon = eta + (1.0 - eta) * dcr;
        let on_vacuum = dcr;
        Ok(Self {
            aux_active: params.p_act * on_photon + (1.0 - params.p_act) * on_vacuum,
            aux_idle: params.q_err * on_photon + (1.0 - params.q_err) * on_vacuum,
            sig_photon: on_photon,
            sig_vacuum: on_vacuum,
        })
    }

    /// Per-detector probabilities (auxiliaries 1..=n, then the signal) when
    /// the photon is lost after module `lost_after`, or survives when `None`.
    fn scenario(&self, n: u32, lost_after: Option<u32>) -> Vec<f64> {
        let activated = lost_after.unwrap_or(n);
        let mut probs: Vec<f64> = (1..=n)
            .map(|j| if j <= activated { self.aux_active } else { self.aux_idle })
            .collect();
        probs.push(if lost_after.is_some() {
            self.sig_vacuum
        } else {
            self.sig_photon
        });
        probs
    }

    fn vacuum(&self, n: u32) -> Vec<f64> {
        let mut probs = vec![self.aux_idle; n as usize];
        probs.push(self.sig_vacuum);
        probs
    }
}

/// Probability that at least `k` of the independent detectors fire, by
/// summing over all `2^len` outcome patterns.
fn at_least_k_by_patterns(probs: &[f64], k: u32) -> f64 {
    let m = probs.len();
    let mut total = 0.0;
    for mask in 0u32..(1u32 << m) {
        if mask.count_ones() < k {
            continue;
        }
        let mut w = 1.0;
        for (bit, &q) in probs.iter().enumerate() {
            w *= if mask >> bit & 1 == 1 { q } else { 1.0 - q };
        }
        total += w;
    }
    total
}

/// Exhaustive (DE, DCR) for one level.
pub fn enumerate_level(det: DetectorPerformance, params: ComponentParams, config: LevelConfig) -> Result<(f64, f64)> {
    let (n, k) = (config.n(), config.k());
    if n > ENUM_N_MAX {
        return Err(EspdError::TooLarge { n, max: ENUM_N_MAX });
    }
    let fire = FireProbs::new(det, params)?;
    let p = params.p;

    let mut de = p.powi(n as i32) * at_least_k_by_patterns(&fire.scenario(n, None), k);
    for i in 1..=n {
        let weight = p.powi(i as i32 - 1) * (1.0 - p);
        de += weight * at_least_k_by_patterns(&fire.scenario(n, Some(i)), k);
    }
    let dcr = at_least_k_by_patterns(&fire.vacuum(n), k);
    Ok((de, dcr))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub de_hat: f64,
    pub dcr_hat: f64,
    pub stderr_de: f64,
    pub stderr_dcr: f64,
}

fn stderr(m: f64, trials: u64) -> f64 {
    (m * (1.0 - m) / trials as f64).sqrt()
}

fn count_positives(rng: &mut ChaCha8Rng, probs: &[f64]) -> u32 {
    probs.iter().map(|&q| u32::from(rng.random::<f64>() < q)).sum()
}

fn block_rng(seed: u64, block: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(2 * block + stream);
    rng
}

/// Monte Carlo estimate of (DE, DCR); deterministic in `(seed, trials)`.
pub fn mc_level(
    det: DetectorPerformance,
    params: ComponentParams,
    config: LevelConfig,
    trials: u64,
    seed: u64,
) -> Result<McEstimate> {
    if trials == 0 {
        return Err(EspdError::ZeroTrials);
    }
    let fire = FireProbs::new(det, params)?;
    let (n, k) = (config.n(), config.k());
    let p = params.p;
    let scenarios: Vec<Vec<f64>> = std::iter::once(fire.scenario(n, None))
        .chain((1..=n).map(|i| fire.scenario(n, Some(i))))
        .collect();
    let vacuum = fire.vacuum(n);

    let blocks = trials.div_ceil(MC_BLOCK);
    let tallies: Vec<(u64, u64)> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let len = MC_BLOCK.min(trials - b * MC_BLOCK);
            let mut de_rng = block_rng(seed, b, 0);
            let mut dcr_rng = block_rng(seed, b, 1);
            let mut de_hits = 0u64;
            let mut dcr_hits = 0u64;
            for _ in 0..len {
                // geometric loss position, 0 meaning the photon survived
                let lost = (1..=n).find(|_| de_rng.random::<f64>() >= p).unwrap_or(0);
                let probs = &scenarios[lost as usize];
                de_hits += u64::from(count_positives(&mut de_rng, probs) >= k);
                dcr_hits += u64::from(count_positives(&mut dcr_rng, &vacuum) >= k);
            }
            (de_hits, dcr_hits)
        })
        .collect();
    let (de_hits, dcr_hits) = tallies.iter().fold((0u64, 0u64), |(a, b), &(x, y)| (a + x, b + y));

    let de_hat = de_hits as f64 / trials as f64;
    let dcr_hat = dcr_hits as f64 / trials as f64;
    Ok(McEstimate {
        de_hat,
        dcr_hat,
        stderr_de: stderr(de_hat, trials),
        stderr_dcr: stderr(dcr_hat, trials),
    })
}

/// Closed form, enumeration and Monte Carlo side by side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleReport {
    pub closed_de: f64,
    pub closed_dcr: f64,
    pub enum_de: f64,
    pub enum_dcr: f64,
    pub mc_de: f64,
    pub mc_dcr: f64,
    pub mc_stderr_de: f64,
    pub mc_stderr_dcr: f64,
    pub trials: u64,
    pub seed: u64,
    pub enum_abs_err_de: f64,
    pub enum_abs_err_dcr: f64,
}

impl OracleReport {
    pub fn enumeration_agrees(&self) -> bool {
        self.enum_abs_err_de <= ENUM_TOL && self.enum_abs_err_dcr <= ENUM_TOL
    }

    /// MC within `MC_SIGMAS` standard errors of enumeration on both outputs.
    ///
    /// The standard error is taken at the enumerated probability, so a rare
    /// event with no hits is still judged against a nonzero spread.
    pub fn mc_agrees(&self) -> bool {
        let ok = |hat: f64, exact: f64| (hat - exact).abs() <= MC_SIGMAS * stderr(exact, self.trials);
        ok(self.mc_de, self.enum_de) && ok(self.mc_dcr, self.enum_dcr)
    }
}

pub fn oracle_report(
    det: DetectorPerformance,
    params: ComponentParams,
    config: LevelConfig,
    trials: u64,
    seed: u64,
) -> Result<OracleReport> {
    let (enum_de, enum_dcr) = enumerate_level(det, params, config)?;
    let closed = level_map(det, params, config)?;
    let mc = mc_level(det, params, config, trials, seed)?;
    Ok(OracleReport {
        closed_de: closed.eta,
        closed_dcr: closed.dcr,
        enum_de,
        enum_dcr,
        mc_de: mc.de_hat,
        mc_dcr: mc.dcr_hat,
        mc_stderr_de: mc.stderr_de,
        mc_stderr_dcr: mc.stderr_dcr,
        trials,
        seed,
        enum_abs_err_de: (closed.eta - enum_de).abs(),
        enum_abs_err_dcr: (closed.dcr - enum_dcr).abs(),
    })
}
