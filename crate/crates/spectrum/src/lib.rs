//! Smooth-independence certificates: the index sets `χ(e,k)`, the polynomial maps
//! `Ω_{(e,k)}(β) = Σ_q β_{q+d−k,1}…β_{q+d−k,v_q}`, their exact Jacobians, and rank
//! certificates for exponent families `U`.

mod certify;
mod omega;

pub use certify::{
    column_reduction, distinct_prime_beta, rank_certify, triangular_order, CertificateLevel, RankCertificate,
    TriangularWitness,
};
pub use omega::{
    chi, chi_from_membership, finite_difference, jacobian_closed_form, jacobian_symbolic, omega_eval,
    omega_prime_eval, omega_prime_jacobian, Monomial, OmegaMap, Var,
};

use exponents::{f_func, g_func, ExpError};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpectrumError {
    #[error("d = {d} does not divide n = {n}")]
    NotDivisible { n: usize, d: usize },
    #[error("({e},{k}) is not in V_(d,n) for d = {d}, n = {n}")]
    NotInV { e: usize, k: usize, d: usize, n: usize },
    #[error("({e},{k}) violates e < k(m+1) with m = {m}")]
    TooLarge { e: usize, k: usize, m: usize },
    #[error("#U = {size} exceeds dm = {dm}")]
    TooMany { size: usize, dm: usize },
    #[error("β must be a d×m table of positive rationals")]
    Beta,
    #[error("order witness is not a permutation of U")]
    Order,
    #[error(transparent)]
    Exponent(#[from] ExpError),
}

/// Which exponent family to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum FamilyKind {
    /// `{(e, min(d,e)) | e ∈ ⟦1, n−d⟧}`.
    MinAngle,
    /// `⟦d, n−1⟧ × {d}`.
    LastAngleD,
}

/// `n = d(m+1)` and a family `U ⊂ V_{d,n}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectrumTarget {
    pub n: usize,
    pub d: usize,
    pub m: usize,
    pub u: Vec<(usize, usize)>,
    /// A permutation of `U` (indices) claimed to satisfy the fresh-index condition.
    pub order: Option<Vec<usize>>,
}

/// `(e, k) ∈ V_{d,n}`: `1 ≤ e ≤ n−1` and `k ∈ ⟦1+g(d,e,n), min(d,e)⟧`.
pub fn in_v(e: usize, k: usize, d: usize, n: usize) -> bool {
    (1..n).contains(&e) && k >= 1 + g_func(d, e, n) && k <= d.min(e)
}

/// `f(e, mk) = max(0, e − mk)`.
pub fn f_of(e: usize, k: usize, m: usize) -> usize {
    f_func(e, m * k)
}

impl SpectrumTarget {
    pub fn custom(n: usize, d: usize, u: Vec<(usize, usize)>) -> Result<Self, SpectrumError> {
        if d == 0 || n % d != 0 || n == d {
            return Err(SpectrumError::NotDivisible { n, d });
        }
        let m = n / d - 1;
        for &(e, k) in &u {
            if !in_v(e, k, d, n) {
                return Err(SpectrumError::NotInV { e, k, d, n });
            }
            if e >= k * (m + 1) {
                return Err(SpectrumError::TooLarge { e, k, m });
            }
        }
        if u.len() > d * m {
            return Err(SpectrumError::TooMany { size: u.len(), dm: d * m });
        }
        Ok(SpectrumTarget { n, d, m, u, order: None })
    }

    pub fn family(kind: FamilyKind, n: usize, d: usize) -> Result<Self, SpectrumError> {
        if d == 0 || n % d != 0 || n == d {
            return Err(SpectrumError::NotDivisible { n, d });
        }
        let u = match kind {
            FamilyKind::MinAngle => (1..=n - d).map(|e| (e, d.min(e))).collect(),
            FamilyKind::LastAngleD => (d..n).map(|e| (e, d)).collect(),
        };
        let mut t = Self::custom(n, d, u)?;
        if kind == FamilyKind::MinAngle {
            // e ascending is the order used for this family
            t.order = Some((0..t.u.len()).collect());
        }
        Ok(t)
    }

    pub fn with_order(mut self, order: Vec<usize>) -> Result<Self, SpectrumError> {
        let mut seen = vec![false; self.u.len()];
        for &i in &order {
            if i >= seen.len() || std::mem::replace(&mut seen[i], true) {
                return Err(SpectrumError::Order);
            }
        }
        if order.len() != self.u.len() {
            return Err(SpectrumError::Order);
        }
        self.order = Some(order);
        Ok(self)
    }

    pub fn dm(&self) -> usize {
        self.d * self.m
    }
}
