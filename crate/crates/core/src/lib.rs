//! Recursive enhancement of single-photon detectors.
//!
//! A detector with efficiency `eta` and dark count rate `d` is wrapped in a
//! level of `n` controlled modules and a `k`-of-`(n+1)` vote; repeating the
//! construction drives the pair toward a fixed point with higher efficiency
//! and far lower dark counts. This crate provides:
//!
//! - [`dynamics`]: the exact level map and schedule iteration,
//! - [`bounds`]: closed-form bounds and the fixed-point condition,
//! - [`oracle`]: exhaustive-enumeration and Monte Carlo cross-checks,
//! - [`optimize`]: resource-aware search over per-level `(n, k)` choices,
//! - [`qkd`]: minimal tolerable channel transmission for QKD links,
//! - [`tables`]: published reference trajectories and their regeneration.

pub mod binomial;
pub mod bounds;
pub mod dynamics;
mod error;
pub mod optimize;
pub mod oracle;
pub mod qkd;
pub mod tables;

pub use dynamics::{
    effective_transmission, iterate_schedule, level_map, ComponentParams, ConvergenceRule, DetectorPerformance,
    IntermediateForm, LevelConfig, LevelIntermediates, Schedule, Trajectory, TrajectoryPoint,
};
pub use error::{EspdError, Result};
