//! Angles `ω_j` and `ψ_j` between subspaces of `R^n`: exact squared sines where a
//! closed form exists, certified intervals (exact characteristic polynomial plus Sturm
//! isolation) for the remaining principal angles, and perturbation intervals for
//! truncated real targets.

pub mod poly;
pub mod roots;
mod projection;
mod sines;
mod truncated;

pub use certified::PrecisionConfig;
pub use projection::{projection_lower_bound_witness, ProjectionWitness};
pub use sines::{
    angle_of_vectors, first_angle_line_to_subspace, line_sine_sq_parts, principal_sines, psi_from_omegas,
    wedge_ratio_sq, AngleEntry, AngleReport,
};
pub use truncated::{angle_interval_to_truncated_target, TruncatedAngle, TruncatedTarget};

use certified::CertError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AngleError {
    #[error("vectors of different dimensions")]
    DimensionMismatch,
    #[error("zero vector")]
    ZeroVector,
    #[error("empty generator set")]
    Empty,
    #[error("generators are linearly dependent")]
    RankDeficient,
    #[error("angle index out of range")]
    IndexOutOfRange,
    #[error("invalid block data: {0}")]
    Blocks(String),
    #[error("projection lemma needs dim F < #J (got {dim} ≥ {blocks})")]
    TooManyDimensions { dim: usize, blocks: usize },
    #[error("truncation level {level} too low: perturbation {delta} is not small against {center}")]
    InsufficientTruncation { level: usize, delta: String, center: String },
    #[error("malformed truncated target: {0}")]
    Target(String),
    #[error("certified arithmetic: {0}")]
    Cert(#[from] CertError),
    #[error("internal: {0}")]
    Internal(String),
}
