//! The level map of a recursive detector cascade and its iteration.
//!
//! A level-`s+1` detector feeds the incoming signal through `n` controlled
//! modules, each coupling one auxiliary photon to the signal path, detects
//! all `n + 1` outputs with level-`s` detectors, and reports positive when
//! at least `k` of them fire. [`level_map`] takes the level-`s` pair
//! (efficiency, dark count rate) to the level-`s+1` pair.

use crate::binomial::{choose, convolved_upper_tail, upper_tail};
use crate::error::{check_prob, EspdError, Result};

/// Largest number of controlled operations per level.
pub const N_MAX: u32 = 64;

/// Detection efficiency and dark count rate of one detector level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorPerformance {
    pub eta: f64,
    pub dcr: f64,
}

impl DetectorPerformance {
    pub fn new(eta: f64, dcr: f64) -> Result<Self> {
        let perf = Self { eta, dcr };
        perf.validate()?;
        Ok(perf)
    }

    pub fn validate(&self) -> Result<()> {
        check_prob("eta", self.eta)?;
        check_prob("dcr", self.dcr)?;
        Ok(())
    }
}

/// Per-module constants, identical for every controlled module at every level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComponentParams {
    /// Signal-path transmission through one module.
    pub p: f64,
    /// Probability the auxiliary path is non-vacuum when the module input is non-vacuum.
    pub p_act: f64,
    /// Probability the auxiliary path is non-vacuum when the module input is vacuum.
    pub q_err: f64,
}

impl ComponentParams {
    pub fn new(p: f64, p_act: f64, q_err: f64) -> Result<Self> {
        let params = Self { p, p_act, q_err };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        check_prob("p", self.p)?;
        check_prob("P", self.p_act)?;
        check_prob("Q", self.q_err)?;
        Ok(())
    }
}

/// Number of controlled operations `n` and vote threshold `k` for one level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LevelConfig {
    n: u32,
    k: u32,
}

impl LevelConfig {
    pub fn new(n: u32, k: u32) -> Result<Self> {
        let reason = if n == 0 {
            Some("n must be at least 1")
        } else if n > N_MAX {
            Some("n exceeds the supported maximum of 64")
        } else if k == 0 {
            Some("k must be at least 1")
        } else if k > n {
            Some("k must not exceed n")
        } else {
            None
        };
        match reason {
            Some(reason) => Err(EspdError::LevelConfig { n, k, reason }),
            None => Ok(Self { n, k }),
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }
}

impl std::fmt::Display for LevelConfig {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.n, self.k)
    }
}

/// Component parameters plus the per-level configurations, level 1 first.
#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    pub params: ComponentParams,
    levels: Vec<LevelConfig>,
}

impl Schedule {
    pub fn new(params: ComponentParams, levels: Vec<LevelConfig>) -> Result<Self> {
        params.validate()?;
        if levels.is_empty() {
            return Err(EspdError::EmptySchedule);
        }
        Ok(Self { params, levels })
    }

    /// Builds a schedule from raw `(n, k)` pairs.
    pub fn from_pairs(params: ComponentParams, pairs: &[(u32, u32)]) -> Result<Self> {
        let levels = pairs
            .iter()
            .map(|&(n, k)| LevelConfig::new(n, k))
            .collect::<Result<Vec<_>>>()?;
        Self::new(params, levels)
    }

    pub fn levels(&self) -> &[LevelConfig] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// Config used at 1-based `level`; the last entry repeats past the end.
    pub fn config_at(&self, level: usize) -> LevelConfig {
        let idx = level.saturating_sub(1).min(self.levels.len() - 1);
        self.levels[idx]
    }
}

/// Positive-report probabilities of the level-`s` detectors inside level `s+1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelIntermediates {
    /// Auxiliary detector, module activated by a non-vacuum input.
    pub p_pos: f64,
    /// Auxiliary detector, module fed vacuum.
    pub q_pos: f64,
    /// Signal detector, photon survived every module.
    pub p_sig: f64,
    /// Signal detector, vacuum on the signal path.
    pub q_sig: f64,
}

/// Which form of the intermediate probabilities the level map uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IntermediateForm {
    #[default]
    Exact,
    /// First-order forms valid for `d << P*eta`: `P*eta`, `Q*eta + d`, `eta`, `d`.
    Approximate,
}

pub fn level_intermediates(det: DetectorPerformance, params: ComponentParams) -> Result<LevelIntermediates> {
    level_intermediates_with(det, params, IntermediateForm::Exact)
}

pub fn level_intermediates_with(
    det: DetectorPerformance,
    params: ComponentParams,
    form: IntermediateForm,
) -> Result<LevelIntermediates> {
    det.validate()?;
    params.validate()?;
    let DetectorPerformance { eta, dcr: d } = det;
    let inter = match form {
        IntermediateForm::Exact => {
            let active = eta * (1.0 - d);
            LevelIntermediates {
                p_pos: params.p_act * active + d,
                q_pos: params.q_err * active + d,
                p_sig: eta + (1.0 - eta) * d,
                q_sig: d,
            }
        }
        IntermediateForm::Approximate => LevelIntermediates {
            p_pos: params.p_act * eta,
            q_pos: (params.q_err * eta + d).min(1.0),
            p_sig: eta,
            q_sig: d,
        },
    };
    Ok(inter)
}

fn validate_intermediates(inter: &LevelIntermediates) -> Result<()> {
    check_prob("p_pos", inter.p_pos)?;
    check_prob("q_pos", inter.q_pos)?;
    check_prob("p_sig", inter.p_sig)?;
    check_prob("q_sig", inter.q_sig)?;
    Ok(())
}

/// Positive-report probability when the photon is lost right after module `i`.
///
/// Auxiliaries `1..=i` were activated, `i+1..=n` saw vacuum and the signal
/// detector sees vacuum.
pub fn de_loss_case(inter: &LevelIntermediates, config: LevelConfig, i: u32) -> Result<f64> {
    validate_intermediates(inter)?;
    let (n, k) = (config.n, i64::from(config.k));
    if i == 0 || i > n {
        return Err(EspdError::LossIndex { i, n });
    }
    let tail = |m| convolved_upper_tail(i, inter.p_pos, n - i, inter.q_pos, m);
    Ok((1.0 - inter.q_sig) * tail(k) + inter.q_sig * tail(k - 1))
}

/// Positive-report probability when the photon survives all `n` modules.
pub fn de_survive_case(inter: &LevelIntermediates, config: LevelConfig) -> Result<f64> {
    validate_intermediates(inter)?;
    let (n, k) = (config.n, i64::from(config.k));
    Ok(inter.p_sig * upper_tail(n, inter.p_pos, k - 1) + (1.0 - inter.p_sig) * upper_tail(n, inter.p_pos, k))
}

/// Same quantity as [`de_survive_case`], written as the single `k-1` term plus the `k` tail.
pub fn de_survive_case_reduced(inter: &LevelIntermediates, config: LevelConfig) -> Result<f64> {
    validate_intermediates(inter)?;
    Ok(inter.p_sig * edge_term(config, inter.p_pos) + upper_tail(config.n, inter.p_pos, config.k.into()))
}

/// `C(n, k-1) x^(k-1) (1-x)^(n-k+1)`.
fn edge_term(config: LevelConfig, x: f64) -> f64 {
    let (n, k) = (config.n, config.k);
    choose(n, k - 1) * x.powi(k as i32 - 1) * (1.0 - x).powi((n - k + 1) as i32)
}

pub fn level_de(det: DetectorPerformance, params: ComponentParams, config: LevelConfig) -> Result<f64> {
    level_de_with(det, params, config, IntermediateForm::Exact)
}

pub fn level_de_with(
    det: DetectorPerformance,
    params: ComponentParams,
    config: LevelConfig,
    form: IntermediateForm,
) -> Result<f64> {
    let inter = level_intermediates_with(det, params, form)?;
    de_from_intermediates(&inter, params.p, config)
}

fn de_from_intermediates(inter: &LevelIntermediates, p: f64, config: LevelConfig) -> Result<f64> {
    let n = config.n;
    let mut terms = Vec::with_capacity(n as usize + 1);
    terms.push(p.powi(n as i32) * de_survive_case(inter, config)?);
    for i in 1..=n {
        terms.push(p.powi(i as i32 - 1) * (1.0 - p) * de_loss_case(inter, config, i)?);
    }
    Ok(crate::binomial::sum_ascending(&terms).min(1.0))
}

pub fn level_dcr(det: DetectorPerformance, params: ComponentParams, config: LevelConfig) -> Result<f64> {
    level_dcr_with(det, params, config, IntermediateForm::Exact)
}

pub fn level_dcr_with(
    det: DetectorPerformance,
    params: ComponentParams,
    config: LevelConfig,
    form: IntermediateForm,
) -> Result<f64> {
    let inter = level_intermediates_with(det, params, form)?;
    Ok(dcr_from_intermediates(&inter, config))
}

fn dcr_from_intermediates(inter: &LevelIntermediates, config: LevelConfig) -> f64 {
    let (n, k) = (config.n, i64::from(config.k));
    (1.0 - inter.q_sig) * upper_tail(n, inter.q_pos, k) + inter.q_sig * upper_tail(n, inter.q_pos, k - 1)
}

/// Dark count rate as the `k-1` edge term weighted by the signal dark count plus the `k` tail.
pub fn level_dcr_reduced(det: DetectorPerformance, params: ComponentParams, config: LevelConfig) -> Result<f64> {
    let inter = level_intermediates(det, params)?;
    Ok(inter.q_sig * edge_term(config, inter.q_pos) + upper_tail(config.n, inter.q_pos, config.k.into()))
}

/// One application of the level map.
pub fn level_map(
    det: DetectorPerformance,
    params: ComponentParams,
    config: LevelConfig,
) -> Result<DetectorPerformance> {
    level_map_with(det, params, config, IntermediateForm::Exact)
}

pub fn level_map_with(
    det: DetectorPerformance,
    params: ComponentParams,
    config: LevelConfig,
    form: IntermediateForm,
) -> Result<DetectorPerformance> {
    let inter = level_intermediates_with(det, params, form)?;
    let eta = de_from_intermediates(&inter, params.p, config)?;
    let dcr = dcr_from_intermediates(&inter, config).min(1.0);
    Ok(DetectorPerformance { eta, dcr })
}

/// When [`iterate_schedule`] stops.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRule {
    pub max_levels: usize,
    pub eta_tol: f64,
    pub dcr_tol: f64,
    /// Stop at the first converged level instead of running to `max_levels`.
    pub halt_on_convergence: bool,
}

impl Default for ConvergenceRule {
    fn default() -> Self {
        Self {
            max_levels: 32,
            eta_tol: 1e-12,
            dcr_tol: 1e-12,
            halt_on_convergence: true,
        }
    }
}

impl ConvergenceRule {
    /// Runs exactly `levels` levels, still recording convergence.
    pub fn fixed_levels(levels: usize) -> Self {
        Self {
            max_levels: levels,
            halt_on_convergence: false,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryPoint {
    pub level: usize,
    /// `None` only for the seed detector at level 0.
    pub config: Option<LevelConfig>,
    pub perf: DetectorPerformance,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub points: Vec<TrajectoryPoint>,
    pub converged: bool,
    pub converged_at: Option<usize>,
}

impl Trajectory {
    pub fn last(&self) -> &TrajectoryPoint {
        self.points.last().expect("trajectory always holds the seed")
    }
}

/// Iterates the level map along `schedule`, repeating its final config
/// when `stop.max_levels` exceeds the schedule length.
///
/// Convergence is only tested once the constant tail of the schedule is
/// reached, where the same map is applied repeatedly.
pub fn iterate_schedule(init: DetectorPerformance, schedule: &Schedule, stop: ConvergenceRule) -> Result<Trajectory> {
    iterate_schedule_with(init, schedule, stop, IntermediateForm::Exact)
}

pub fn iterate_schedule_with(
    init: DetectorPerformance,
    schedule: &Schedule,
    stop: ConvergenceRule,
    form: IntermediateForm,
) -> Result<Trajectory> {
    init.validate()?;
    if schedule.is_empty() {
        return Err(EspdError::EmptySchedule);
    }
    let mut points = vec![TrajectoryPoint {
        level: 0,
        config: None,
        perf: init,
    }];
    let mut converged_at = None;
    let mut perf = init;
    for level in 1..=stop.max_levels {
        let config = schedule.config_at(level);
        let next = level_map_with(perf, schedule.params, config, form)?;
        points.push(TrajectoryPoint {
            level,
            config: Some(config),
            perf: next,
        });
        let in_tail = level >= schedule.len();
        if in_tail
            && converged_at.is_none()
            && (next.eta - perf.eta).abs() < stop.eta_tol
            && (next.dcr - perf.dcr).abs() < stop.dcr_tol
        {
            converged_at = Some(level);
            if stop.halt_on_convergence {
                break;
            }
        }
        perf = next;
    }
    Ok(Trajectory {
        points,
        converged: converged_at.is_some(),
        converged_at,
    })
}

/// Per-module transmission of a post-selected gate that succeeds with probability `1/N`.
pub fn effective_transmission(p: f64, attempts: u32) -> Result<f64> {
    check_prob("p", p)?;
    if attempts == 0 {
        return Err(EspdError::Domain {
            name: "N",
            value: 0.0,
            lo: 1.0,
            hi: f64::INFINITY,
        });
    }
    Ok(p.powi(attempts as i32))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference_params() -> ComponentParams {
        ComponentParams::new(0.98, 0.97, 0.002).unwrap()
    }

    fn perf(eta: f64, dcr: f64) -> DetectorPerformance {
        DetectorPerformance::new(eta, dcr).unwrap()
    }

    fn cfg(n: u32, k: u32) -> LevelConfig {
        LevelConfig::new(n, k).unwrap()
    }

    #[test]
    fn intermediates_of_vacuum_seed_are_zero() {
        let inter = level_intermediates(perf(0.0, 0.0), reference_params()).unwrap();
        assert_eq!(
            inter,
            LevelIntermediates {
                p_pos: 0.0,
                q_pos: 0.0,
                p_sig: 0.0,
                q_sig: 0.0
            }
        );
    }

    #[test]
    fn intermediates_of_perfect_device() {
        let params = ComponentParams::new(0.5, 1.0, 0.0).unwrap();
        let inter = level_intermediates(perf(1.0, 0.0), params).unwrap();
        assert_eq!(
            inter,
            LevelIntermediates {
                p_pos: 1.0,
                q_pos: 0.0,
                p_sig: 1.0,
                q_sig: 0.0
            }
        );
    }

    #[test]
    fn intermediates_direct_arithmetic() {
        let inter = level_intermediates(perf(0.59, 0.01), reference_params()).unwrap();
        assert!((inter.p_pos - (0.97 * 0.59 * 0.99 + 0.01)).abs() < 1e-15);
        assert!((inter.q_pos - (0.002 * 0.59 * 0.99 + 0.01)).abs() < 1e-15);
        assert!((inter.p_sig - (0.59 + 0.41 * 0.01)).abs() < 1e-15);
        assert_eq!(inter.q_sig, 0.01);
        // first-principles route: P*(eta + (1-eta)d) + (1-P)d
        let fire = 0.59 + 0.41 * 0.01;
        assert!((inter.p_pos - (0.97 * fire + 0.03 * 0.01)).abs() < 1e-15);
    }

    #[test]
    fn out_of_range_inputs_are_rejected() {
        assert!(DetectorPerformance::new(1.2, 0.0).is_err());
        assert!(ComponentParams::new(0.9, 0.9, -0.1).is_err());
        let bad = DetectorPerformance {
            eta: 0.5,
            dcr: f64::NAN,
        };
        assert!(level_intermediates(bad, reference_params()).is_err());
        assert!(level_map(bad, reference_params(), cfg(2, 1)).is_err());
    }

    #[test]
    fn level_config_bounds() {
        assert!(LevelConfig::new(0, 1).is_err());
        assert!(LevelConfig::new(3, 0).is_err());
        assert!(LevelConfig::new(3, 4).is_err());
        assert!(LevelConfig::new(65, 1).is_err());
        assert!(LevelConfig::new(64, 64).is_ok());
    }

    #[test]
    fn loss_case_zero_inputs() {
        let zero = LevelIntermediates {
            p_pos: 0.0,
            q_pos: 0.0,
            p_sig: 0.0,
            q_sig: 0.0,
        };
        for k in 1..=5 {
            for i in 1..=5 {
                assert_eq!(de_loss_case(&zero, cfg(5, k), i).unwrap(), 0.0);
            }
        }
    }

    #[test]
    fn loss_case_degenerate_bernoulli() {
        let inter = LevelIntermediates {
            p_pos: 1.0,
            q_pos: 0.0,
            p_sig: 0.3,
            q_sig: 0.0,
        };
        assert_eq!(de_loss_case(&inter, cfg(4, 2), 3).unwrap(), 1.0);
        // only one activated auxiliary: cannot reach 2
        assert_eq!(de_loss_case(&inter, cfg(4, 2), 1).unwrap(), 0.0);
    }

    #[test]
    fn loss_case_index_checked() {
        let inter = LevelIntermediates {
            p_pos: 0.5,
            q_pos: 0.1,
            p_sig: 0.5,
            q_sig: 0.2,
        };
        assert!(matches!(
            de_loss_case(&inter, cfg(3, 2), 0),
            Err(EspdError::LossIndex { .. })
        ));
        assert!(matches!(
            de_loss_case(&inter, cfg(3, 2), 4),
            Err(EspdError::LossIndex { .. })
        ));
    }

    #[test]
    fn loss_case_hand_enumeration() {
        // n=3, k=2, i=1: aux1 ~ 0.5, aux2, aux3 ~ 0.1, signal ~ 0.2
        let inter = LevelIntermediates {
            p_pos: 0.5,
            q_pos: 0.1,
            p_sig: 0.9,
            q_sig: 0.2,
        };
        let probs = [0.5, 0.1, 0.1, 0.2];
        let mut expected = 0.0;
        for mask in 0u32..16 {
            let w: f64 = probs
                .iter()
                .enumerate()
                .map(|(b, &q)| if mask >> b & 1 == 1 { q } else { 1.0 - q })
                .product();
            if mask.count_ones() >= 2 {
                expected += w;
            }
        }
        let got = de_loss_case(&inter, cfg(3, 2), 1).unwrap();
        assert!((got - expected).abs() < 1e-12, "{got} vs {expected}");
    }

    #[test]
    fn survive_case_limits_and_forms() {
        let sure = LevelIntermediates {
            p_pos: 1.0,
            q_pos: 0.0,
            p_sig: 1.0,
            q_sig: 0.0,
        };
        assert_eq!(de_survive_case(&sure, cfg(5, 1)).unwrap(), 1.0);
        let none = LevelIntermediates {
            p_pos: 0.0,
            q_pos: 0.0,
            p_sig: 0.0,
            q_sig: 0.0,
        };
        assert_eq!(de_survive_case(&none, cfg(5, 3)).unwrap(), 0.0);

        let inter = LevelIntermediates {
            p_pos: 0.6,
            q_pos: 0.0,
            p_sig: 0.9,
            q_sig: 0.0,
        };
        let a = de_survive_case(&inter, cfg(4, 2)).unwrap();
        let b = de_survive_case_reduced(&inter, cfg(4, 2)).unwrap();
        assert!((a - b).abs() < 1e-14);
        // 0.9 * P[X>=1] + 0.1 * P[X>=2], X ~ Bin(4, 0.6)
        let p0 = 0.4f64.powi(4);
        let p1 = 4.0 * 0.6 * 0.4f64.powi(3);
        assert!((a - (0.9 * (1.0 - p0) + 0.1 * (1.0 - p0 - p1))).abs() < 1e-14);
    }

    #[test]
    fn first_level_of_reference_seeds() {
        let d = level_map(perf(0.59, 1e-2), reference_params(), cfg(4, 1)).unwrap();
        assert!((d.eta - 0.974).abs() <= 1e-3, "{d:?}");
        assert!((d.dcr / 5.3e-2 - 1.0).abs() <= 0.1, "{d:?}");
        let de = level_de(perf(0.275, 1e-6), reference_params(), cfg(4, 1)).unwrap();
        assert!((de - 0.769).abs() <= 1e-3);
    }

    #[test]
    fn second_level_and_low_fidelity_gate() {
        let d = level_map(perf(0.974, 5.3e-2), reference_params(), cfg(4, 2)).unwrap();
        assert!((d.eta - 0.982).abs() <= 1e-3, "{d:?}");
        assert!((d.dcr / 2.7e-2 - 1.0).abs() <= 0.1, "{d:?}");

        let low = ComponentParams::new(0.98, 0.40, 0.002).unwrap();
        let d = level_map(perf(0.59, 1e-2), low, cfg(2, 1)).unwrap();
        assert!((d.eta - 0.751).abs() <= 1e-3, "{d:?}");
        assert!((d.dcr / 3.2e-2 - 1.0).abs() <= 0.1, "{d:?}");
    }

    #[test]
    fn vacuum_seed_stays_dark() {
        for (n, k) in [(1, 1), (4, 2), (8, 4)] {
            assert_eq!(level_de(perf(0.0, 0.0), reference_params(), cfg(n, k)).unwrap(), 0.0);
        }
    }

    #[test]
    fn no_noise_sources_means_no_dark_counts() {
        let params = ComponentParams::new(0.9, 0.8, 0.0).unwrap();
        assert_eq!(level_dcr(perf(0.7, 0.0), params, cfg(5, 1)).unwrap(), 0.0);
    }

    #[test]
    fn reduced_dcr_form_matches() {
        let params = ComponentParams::new(0.98, 0.97, 0.01).unwrap();
        let a = level_dcr(perf(0.9, 1e-3), params, cfg(5, 3)).unwrap();
        let b = level_dcr_reduced(perf(0.9, 1e-3), params, cfg(5, 3)).unwrap();
        assert!((a - b).abs() < 1e-14);
    }

    #[test]
    fn iterate_reaches_reference_plateaus() {
        let sched = Schedule::from_pairs(reference_params(), &[(4, 1), (4, 2)]).unwrap();
        let t = iterate_schedule(perf(0.59, 1e-2), &sched, ConvergenceRule::fixed_levels(7)).unwrap();
        let last = t.last().perf;
        assert!((last.eta - 0.978).abs() <= 1e-3);
        assert!((last.dcr / 2.4e-5 - 1.0).abs() <= 0.1, "{last:?}");

        let sched = Schedule::from_pairs(reference_params(), &[(8, 1), (8, 4)]).unwrap();
        let t = iterate_schedule(perf(0.275, 1e-6), &sched, ConvergenceRule::fixed_levels(8)).unwrap();
        let last = t.last().perf;
        assert!((last.eta - 0.934).abs() <= 1e-3);
        assert!((last.dcr / 8.5e-10 - 1.0).abs() <= 0.1, "{last:?}");
    }

    #[test]
    fn iterate_structure_and_convergence() {
        let sched = Schedule::from_pairs(reference_params(), &[(8, 1), (8, 4)]).unwrap();
        let t = iterate_schedule(perf(0.59, 1e-2), &sched, ConvergenceRule::default()).unwrap();
        assert!(t.converged);
        let at = t.converged_at.unwrap();
        assert_eq!(t.points.len(), at + 1);
        assert!(t.points[0].config.is_none());
        assert!(t.points[1..].iter().all(|p| p.config.is_some()));
        assert_eq!(t.points[1].config, Some(cfg(8, 1)));
        assert_eq!(t.points[at].config, Some(cfg(8, 4)));

        let full = iterate_schedule(perf(0.59, 1e-2), &sched, ConvergenceRule::fixed_levels(40)).unwrap();
        assert_eq!(full.points.len(), 41);
        assert_eq!(full.converged_at, Some(at));
    }

    #[test]
    fn empty_schedule_rejected() {
        assert_eq!(Schedule::new(reference_params(), vec![]), Err(EspdError::EmptySchedule));
        assert!(Schedule::from_pairs(reference_params(), &[]).is_err());
    }

    #[test]
    fn approximate_form_differs_only_slightly_at_reference_point() {
        let exact = level_map(perf(0.59, 1e-2), reference_params(), cfg(4, 1)).unwrap();
        let approx = level_map_with(
            perf(0.59, 1e-2),
            reference_params(),
            cfg(4, 1),
            IntermediateForm::Approximate,
        )
        .unwrap();
        assert!((exact.eta - approx.eta).abs() < 5e-3);
        assert!(exact != approx);
    }

    #[test]
    fn post_selection_transmission() {
        assert_eq!(effective_transmission(0.98, 1).unwrap(), 0.98);
        assert_eq!(effective_transmission(1.0, 10).unwrap(), 1.0);
        let t = effective_transmission(0.98, 10).unwrap();
        assert!((t - 0.817_072_806_887_546_7).abs() < 1e-12);
        assert!(effective_transmission(0.98, 0).is_err());
        assert!(effective_transmission(1.5, 2).is_err());
    }
}
