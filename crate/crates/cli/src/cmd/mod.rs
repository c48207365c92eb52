use clap::Args;
use espd_core::{ComponentParams, DetectorPerformance};

use crate::failure::Failure;

pub mod figdata;
pub mod iterate;
pub mod optimize;
pub mod oracle;
pub mod qkd;
pub mod tables;

/// Seed detector and component parameters; defaults are the high-fidelity reference setup.
#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    /// Seed detection efficiency.
    #[arg(long, default_value_t = 0.59)]
    pub eta0: f64,
    /// Seed dark count rate.
    #[arg(long, default_value_t = 1e-2)]
    pub d0: f64,
    /// Signal transmission per controlled module.
    #[arg(long, default_value_t = 0.98)]
    pub p: f64,
    /// Auxiliary activation probability for a non-vacuum input.
    #[arg(long, default_value_t = 0.97)]
    pub p_act: f64,
    /// Auxiliary activation probability for a vacuum input.
    #[arg(long, default_value_t = 0.002)]
    pub q_err: f64,
}

impl ModelArgs {
    pub fn resolve(&self) -> Result<(DetectorPerformance, ComponentParams), Failure> {
        let init = DetectorPerformance::new(self.eta0, self.d0).map_err(Failure::invalid)?;
        let params = ComponentParams::new(self.p, self.p_act, self.q_err).map_err(Failure::invalid)?;
        Ok((init, params))
    }
}
