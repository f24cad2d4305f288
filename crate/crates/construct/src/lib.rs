//! Subspaces with prescribed exponents: growth schedules `α_k`, digit families `u^j_k`,
//! truncated Liouville-type vectors `X_N` and their approximating subspaces, for the
//! single line, the nested construction in higher dimension and the block construction.

mod blocks;
mod digits;
mod line;
mod recursive;
mod schedule;

pub use blocks::BlockConstruction;
pub use digits::DigitFamily;
pub use line::{LineConstruction, LineTranscript};
pub use recursive::RecursiveConstruction;
pub use schedule::{alpha_sequence, is_prime, GrowthSchedule, DEFAULT_FLOOR_CAP};

use thiserror::Error;

/// Strict mode enforces the growth thresholds; relaxed mode accepts any
/// schedule whose ratios exceed 2, for experiments at desk scale.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Strict,
    Relaxed,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructError {
    #[error("invalid growth schedule: {0}")]
    Schedule(String),
    #[error("theta = {0} is not a prime ≥ 5")]
    Theta(String),
    #[error("floor of alpha_{index} exceeds the cap {cap}")]
    FloorCap { index: usize, cap: String },
    #[error("dimension out of range: {0}")]
    Dimension(String),
    #[error("strict-mode threshold violated: {0}")]
    Threshold(String),
    #[error("digit {0} is past the explicit transcript")]
    Transcript(usize),
    #[error("index mismatch: {0}")]
    Index(String),
    #[error(transparent)]
    Exact(#[from] exactlin::ExactError),
    #[error(transparent)]
    Exponent(#[from] exponents::ExpError),
    #[error(transparent)]
    Angle(#[from] angles::AngleError),
}
