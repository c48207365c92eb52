use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EspdError {
    #[error("{name} = {value} is outside [{lo}, {hi}]")]
    Domain {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("invalid level config (n = {n}, k = {k}): {reason}")]
    LevelConfig { n: u32, k: u32, reason: &'static str },

    #[error("loss index {i} outside 1..={n}")]
    LossIndex { i: u32, n: u32 },

    #[error("schedule has no levels")]
    EmptySchedule,

    #[error("enumeration supports n <= {max}, got n = {n}")]
    TooLarge { n: u32, max: u32 },

    #[error("trial count must be at least 1")]
    ZeroTrials,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("detection efficiency must be positive")]
    ZeroEfficiency,

    #[error("gamma denominator {0} is not positive")]
    NonPositiveDenominator(f64),
}

pub type Result<T> = std::result::Result<T, EspdError>;

/// Rejects NaN and values outside `[lo, hi]`.
pub(crate) fn check_range(name: &'static str, value: f64, lo: f64, hi: f64) -> Result<f64> {
    if value >= lo && value <= hi {
        Ok(value)
    } else {
        Err(EspdError::Domain { name, value, lo, hi })
    }
}

pub(crate) fn check_prob(name: &'static str, value: f64) -> Result<f64> {
    check_range(name, value, 0.0, 1.0)
}
