use espd_core::EspdError;

/// A run that ends with a message and a nonzero exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

pub const EXIT_OK: u8 = 0;
pub const EXIT_COMPUTE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    pub fn compute(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_COMPUTE,
            message: message.into(),
        }
    }

    /// Rejected input.
    pub fn invalid(e: EspdError) -> Self {
        Self::usage(e.to_string())
    }

    /// Failure after the input was accepted.
    pub fn during(e: EspdError) -> Self {
        Self::compute(e.to_string())
    }
}
