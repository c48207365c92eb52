//! Exhaustive search over per-level `(n, k)` schedules.
//!
//! A schedule of `L` levels with `n_l` controlled operations at level `l`
//! needs `prod (n_l + 1)` base detectors. The search enumerates schedules
//! depth first, evaluating each prefix once, and keeps the best `top`
//! schedules that meet both targets under the ordering
//! `(cost, dcr, -eta, schedule)`.
//!
//! Pruning is by cost only: any extension multiplies the cost by at least
//! 2, so a prefix is dropped once twice its cost exceeds the worst cost
//! held in any full result set. Parallel branches share that bound through
//! an atomic; since pruning only discards schedules that cannot make the
//! final cut, the output is the same for any interleaving.

use std::cmp::Ordering;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use rayon::prelude::*;

use crate::dynamics::{
    iterate_schedule, level_map, ComponentParams, ConvergenceRule, DetectorPerformance, LevelConfig, Schedule,
};
use crate::error::{EspdError, Result};

pub const MAX_SEARCH_LEVELS: usize = 6;
pub const MAX_SEARCH_N: u32 = 12;
pub const DEFAULT_TOP: usize = 50;

/// Which thresholds are admissible at each level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KRule {
    /// Any `1 <= k <= n`.
    #[default]
    Free,
    /// `1 <= k <= n` and `k` never decreases from one level to the next.
    NonDecreasing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CostModel {
    /// Product of `(n_l + 1)` over levels.
    #[default]
    Product,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationQuery {
    pub init: DetectorPerformance,
    pub params: ComponentParams,
    pub de_target: f64,
    pub dcr_target: f64,
    pub max_levels: usize,
    pub n_max: u32,
    pub k_rule: KRule,
    pub cost_model: CostModel,
    /// Keep at most this many schedules; `None` keeps every feasible one.
    pub top: Option<usize>,
}

impl OptimizationQuery {
    pub fn new(init: DetectorPerformance, params: ComponentParams, de_target: f64, dcr_target: f64) -> Self {
        Self {
            init,
            params,
            de_target,
            dcr_target,
            max_levels: 4,
            n_max: 8,
            k_rule: KRule::Free,
            cost_model: CostModel::Product,
            top: Some(DEFAULT_TOP),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.init.validate()?;
        self.params.validate()?;
        if !self.de_target.is_finite() || !self.dcr_target.is_finite() {
            return Err(EspdError::Precondition("targets must be finite".into()));
        }
        if self.max_levels == 0 || self.max_levels > MAX_SEARCH_LEVELS {
            return Err(EspdError::Precondition(format!(
                "max_levels = {} outside 1..={MAX_SEARCH_LEVELS}",
                self.max_levels
            )));
        }
        if self.n_max == 0 || self.n_max > MAX_SEARCH_N {
            return Err(EspdError::Precondition(format!(
                "n_max = {} outside 1..={MAX_SEARCH_N}",
                self.n_max
            )));
        }
        if self.top == Some(0) {
            return Err(EspdError::Precondition("top must be at least 1".into()));
        }
        Ok(())
    }

    fn meets(&self, perf: DetectorPerformance) -> bool {
        perf.eta >= self.de_target && perf.dcr <= self.dcr_target
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankedSchedule {
    pub schedule: Schedule,
    pub final_perf: DetectorPerformance,
    pub cost: u64,
    pub levels_used: usize,
}

impl RankedSchedule {
    /// `(n,k)` pairs joined with `+`, e.g. `(8,2)+(8,4)`.
    pub fn encoding(&self) -> String {
        encode(self.schedule.levels())
    }
}

pub fn encode(levels: &[LevelConfig]) -> String {
    levels.iter().map(ToString::to_string).collect::<Vec<_>>().join("+")
}

pub fn resource_cost(schedule: &Schedule) -> u64 {
    cost_of(schedule.levels())
}

fn cost_of(levels: &[LevelConfig]) -> u64 {
    levels
        .iter()
        .fold(1u64, |acc, c| acc.saturating_mul(u64::from(c.n()) + 1))
}

/// Canonical result ordering: cost, then DCR, then higher DE, then schedule.
pub fn rank_order(a: &RankedSchedule, b: &RankedSchedule) -> Ordering {
    a.cost
        .cmp(&b.cost)
        .then_with(|| a.final_perf.dcr.total_cmp(&b.final_perf.dcr))
        .then_with(|| b.final_perf.eta.total_cmp(&a.final_perf.eta))
        .then_with(|| a.schedule.levels().cmp(b.schedule.levels()))
}

fn level_choices(n_max: u32, k_rule: KRule, prev_k: Option<u32>) -> Vec<LevelConfig> {
    let k_min = match (k_rule, prev_k) {
        (KRule::NonDecreasing, Some(k)) => k,
        _ => 1,
    };
    let mut out = Vec::new();
    for n in 1..=n_max {
        for k in k_min..=n {
            out.push(LevelConfig::new(n, k).expect("1 <= k <= n <= 12"));
        }
    }
    out
}

/// Bounded result set kept sorted by [`rank_order`].
struct Best<'a> {
    cap: Option<usize>,
    items: Vec<RankedSchedule>,
    /// Smallest worst-kept cost over all full result sets.
    shared: &'a AtomicU64,
}

impl Best<'_> {
    fn insert(&mut self, item: RankedSchedule) {
        let pos = self
            .items
            .binary_search_by(|probe| rank_order(probe, &item))
            .unwrap_or_else(|e| e);
        match self.cap {
            Some(cap) if pos >= cap => {}
            Some(cap) => {
                self.items.insert(pos, item);
                self.items.truncate(cap);
                if self.items.len() == cap {
                    self.shared.fetch_min(self.items[cap - 1].cost, AtomicOrdering::Relaxed);
                }
            }
            None => self.items.insert(pos, item),
        }
    }

    fn bound(&self) -> u64 {
        self.shared.load(AtomicOrdering::Relaxed)
    }

    /// Whether a prefix of this cost can still produce a kept extension.
    fn extension_possible(&self, prefix_cost: u64) -> bool {
        prefix_cost.saturating_mul(2) <= self.bound()
    }

    fn admits_cost(&self, cost: u64) -> bool {
        cost <= self.bound()
    }
}

struct Search<'a> {
    query: &'a OptimizationQuery,
    best: Best<'a>,
}

impl Search<'_> {
    fn visit(&mut self, prefix: &mut Vec<LevelConfig>, perf: DetectorPerformance) -> Result<()> {
        let cost = cost_of(prefix);
        if self.query.meets(perf) && self.best.admits_cost(cost) {
            self.best.insert(RankedSchedule {
                schedule: Schedule::new(self.query.params, prefix.clone())?,
                final_perf: perf,
                cost,
                levels_used: prefix.len(),
            });
        }
        if prefix.len() >= self.query.max_levels || !self.best.extension_possible(cost) {
            return Ok(());
        }
        let prev_k = prefix.last().map(LevelConfig::k);
        for config in level_choices(self.query.n_max, self.query.k_rule, prev_k) {
            if !self.best.extension_possible(cost) {
                break;
            }
            if !self.best.admits_cost(cost.saturating_mul(u64::from(config.n()) + 1)) {
                continue;
            }
            let next = level_map(perf, self.query.params, config)?;
            prefix.push(config);
            self.visit(prefix, next)?;
            prefix.pop();
        }
        Ok(())
    }
}

/// All (or the best `top`) schedules meeting both targets, in canonical order.
///
/// First-level branches run in parallel; each keeps its own bounded result
/// set and the merged list is re-sorted, so output does not depend on
/// thread count.
pub fn search_schedules(query: &OptimizationQuery) -> Result<Vec<RankedSchedule>> {
    query.validate()?;
    let firsts = level_choices(query.n_max, query.k_rule, None);
    let shared = AtomicU64::new(u64::MAX);
    let partials: Vec<Vec<RankedSchedule>> = firsts
        .par_iter()
        .map(|&first| {
            let mut search = Search {
                query,
                best: Best {
                    cap: query.top,
                    items: Vec::new(),
                    shared: &shared,
                },
            };
            let perf = level_map(query.init, query.params, first)?;
            let mut prefix = vec![first];
            search.visit(&mut prefix, perf)?;
            Ok(search.best.items)
        })
        .collect::<Result<_>>()?;

    let mut merged: Vec<RankedSchedule> = partials.into_iter().flatten().collect();
    merged.sort_by(rank_order);
    if let Some(top) = query.top {
        merged.truncate(top);
    }
    Ok(merged)
}

/// Re-evaluates a ranked schedule through the trajectory code.
pub fn reevaluate(init: DetectorPerformance, ranked: &RankedSchedule) -> Result<DetectorPerformance> {
    let t = iterate_schedule(
        init,
        &ranked.schedule,
        ConvergenceRule::fixed_levels(ranked.levels_used),
    )?;
    Ok(t.last().perf)
}

fn dominates(a: &RankedSchedule, b: &RankedSchedule) -> bool {
    let no_worse = a.cost <= b.cost && a.final_perf.eta >= b.final_perf.eta && a.final_perf.dcr <= b.final_perf.dcr;
    let better = a.cost < b.cost || a.final_perf.eta > b.final_perf.eta || a.final_perf.dcr < b.final_perf.dcr;
    no_worse && better
}

/// Non-dominated subset under (lower cost, higher DE, lower DCR), ordered
/// by cost then descending DE.
pub fn pareto_front(results: &[RankedSchedule]) -> Vec<RankedSchedule> {
    let mut front: Vec<RankedSchedule> = results
        .iter()
        .filter(|r| !results.iter().any(|o| dominates(o, r)))
        .cloned()
        .collect();
    front.sort_by(|a, b| {
        a.cost
            .cmp(&b.cost)
            .then_with(|| b.final_perf.eta.total_cmp(&a.final_perf.eta))
    });
    front
}
