//! Certified real arithmetic: dyadic intervals with outward rounding, rigorous
//! logarithms and square roots, and a refinement driver that doubles precision
//! until a decision is reached.

mod dyadic;
mod elementary;
mod format;
mod interval;

pub use dyadic::Dyadic;
pub use elementary::{ln, ln2, ln_int, ln_ratio, ln_rational, log_ratio_base};
pub use format::to_sci;
pub use interval::Interval;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CertError {
    #[error("interval contains zero in a division")]
    DivisionByZero,
    #[error("domain error: {0}")]
    Domain(&'static str),
    #[error("precision exhausted after {refinements} refinements at {bits} bits")]
    PrecisionExhausted { bits: u32, refinements: u32 },
}

/// Binary working precision and how many times it may be doubled.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrecisionConfig {
    pub working_bits: u32,
    pub max_refinements: u32,
}

impl Default for PrecisionConfig {
    fn default() -> Self {
        PrecisionConfig { working_bits: 256, max_refinements: 8 }
    }
}

impl PrecisionConfig {
    pub fn new(working_bits: u32, max_refinements: u32) -> Result<Self, CertError> {
        if working_bits < 64 {
            return Err(CertError::Domain("working precision below 64 bits"));
        }
        Ok(PrecisionConfig { working_bits, max_refinements })
    }

    /// Runs `attempt` at the working precision, doubling it on `None` until the
    /// refinement budget runs out.
    pub fn refine<T>(&self, mut attempt: impl FnMut(u32) -> Option<T>) -> Result<T, CertError> {
        let mut bits = self.working_bits;
        for _ in 0..=self.max_refinements {
            if let Some(v) = attempt(bits) {
                return Ok(v);
            }
            bits = bits.saturating_mul(2);
        }
        Err(CertError::PrecisionExhausted { bits: bits / 2, refinements: self.max_refinements })
    }
}
