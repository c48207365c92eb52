//! Minimal tolerable channel transmission `gamma` for a QKD link, i.e. the
//! transmission below which detector dark counts push the error rate past
//! the protocol's secure threshold.

use crate::dynamics::DetectorPerformance;
use crate::error::{check_prob, check_range, EspdError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QkdScenario {
    /// Secure error threshold.
    pub e_th: f64,
    /// Error rate excluding detector contributions.
    pub e_c: f64,
    /// Error rate attached to dark-count clicks in the exact form.
    pub e: f64,
}

impl QkdScenario {
    /// Scenario with `e` defaulted to `e_th`.
    pub fn new(e_th: f64, e_c: f64) -> Result<Self> {
        Self::with_e(e_th, e_c, e_th)
    }

    pub fn with_e(e_th: f64, e_c: f64, e: f64) -> Result<Self> {
        let scn = Self { e_th, e_c, e };
        scn.validate()?;
        Ok(scn)
    }

    pub fn validate(&self) -> Result<()> {
        check_range("e_th", self.e_th, 0.0, 0.5)?;
        check_range("e_c", self.e_c, 0.0, 0.5)?;
        check_prob("e", self.e)?;
        if self.e_c >= self.e_th {
            return Err(EspdError::Precondition(format!(
                "e_c = {} must be below e_th = {}",
                self.e_c, self.e_th
            )));
        }
        Ok(())
    }
}

fn check_inputs(scn: &QkdScenario, det: &DetectorPerformance) -> Result<()> {
    scn.validate()?;
    det.validate()?;
    if det.eta <= 0.0 {
        return Err(EspdError::ZeroEfficiency);
    }
    Ok(())
}

/// `(1 - 2 e_th) d / (eta [e_th - e_c + d (1 - 2e)])`.
pub fn gamma_exact(scn: &QkdScenario, det: &DetectorPerformance) -> Result<f64> {
    check_inputs(scn, det)?;
    let bracket = scn.e_th - scn.e_c + det.dcr * (1.0 - 2.0 * scn.e);
    if bracket <= 0.0 {
        return Err(EspdError::NonPositiveDenominator(det.eta * bracket));
    }
    Ok((1.0 - 2.0 * scn.e_th) * det.dcr / (det.eta * bracket))
}

/// Small-`d` form `(1 - 2 e_th) / (e_th - e_c) * d / eta`.
pub fn gamma_approx(scn: &QkdScenario, det: &DetectorPerformance) -> Result<f64> {
    check_inputs(scn, det)?;
    Ok((1.0 - 2.0 * scn.e_th) / (scn.e_th - scn.e_c) * det.dcr / det.eta)
}

/// Relative gap `d (1 - 2e) / (e_th - e_c)` between the two forms, measured
/// against the exact value.
pub fn approximation_gap(scn: &QkdScenario, det: &DetectorPerformance) -> f64 {
    (det.dcr * (1.0 - 2.0 * scn.e) / (scn.e_th - scn.e_c)).abs()
}
