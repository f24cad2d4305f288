//! Exact linear and exterior algebra over `Z^n` and `Q^n`: wedge products, Plücker
//! coordinates, lattice saturation, heights, orthogonal complements and coordinate
//! projections, plus exact arithmetic in `Q(√5)`.

pub mod matrix;
mod multivector;
mod subspace;
mod surd;

pub use multivector::{colex_subsets, wedge, wedge_int, wedge_rat, MultiVector};
pub use subspace::{
    coord_project, height_sq, membership_by_wedge, orth_complement, saturate, wedge_residual_sq, Membership,
    ProjectionSplit, RationalSubspace,
};
pub use surd::{at_least_golden_square, c_constant, Surd5};

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

pub type IntVector = Vec<BigInt>;
pub type RatMatrix = Vec<Vec<BigRational>>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("vectors of different dimensions")]
    DimensionMismatch,
    #[error("empty input")]
    Empty,
    #[error("spanning set spans the zero space")]
    ZeroSpan,
    #[error("zero vector")]
    ZeroVector,
    #[error("vectors are linearly dependent")]
    LinearlyDependent,
    #[error("dimension out of range")]
    DimensionOutOfRange,
}

/// Integer vector from machine integers.
pub fn ivec(xs: &[i64]) -> IntVector {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}
