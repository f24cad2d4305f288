use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::matrix::{content, gram_det, integer_kernel, norm_sq, rank, row_hnf};
use crate::multivector::{wedge_int, MultiVector};
use crate::{ExactError, IntVector};

/// A rational subspace of `Q^n` carried by an integer basis, its primitive Plücker
/// vector (colex order, first nonzero coordinate positive) and squared height.
#[derive(Clone, Debug)]
pub struct RationalSubspace {
    n: usize,
    basis: Vec<IntVector>,
    plucker: Vec<BigInt>,
    height_sq: BigInt,
}

impl PartialEq for RationalSubspace {
    fn eq(&self, o: &Self) -> bool {
        self.n == o.n && self.basis.len() == o.basis.len() && self.plucker == o.plucker
    }
}

impl Eq for RationalSubspace {}

fn sign_normalize(mut v: Vec<BigInt>) -> Vec<BigInt> {
    if let Some(x) = v.iter().find(|x| !x.is_zero()) {
        if x.is_negative() {
            for y in v.iter_mut() {
                *y = -&*y;
            }
        }
    }
    v
}

fn primitive_plucker(w: &[BigInt]) -> Vec<BigInt> {
    let c = content(w);
    let p: Vec<BigInt> = if c.is_one() { w.to_vec() } else { w.iter().map(|x| x / &c).collect() };
    sign_normalize(p)
}

impl RationalSubspace {
    pub fn zero(n: usize) -> Self {
        RationalSubspace { n, basis: Vec::new(), plucker: vec![BigInt::one()], height_sq: BigInt::one() }
    }

    pub fn full(n: usize) -> Self {
        let basis = (0..n)
            .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect();
        RationalSubspace { n, basis, plucker: vec![BigInt::one()], height_sq: BigInt::one() }
    }

    /// Takes `basis` as a Z-basis of `B ∩ Z^n` without checking saturation: the
    /// squared height is the squared norm of the wedge of exactly these vectors.
    /// Agreement with [`saturate`] is what validates such a claim.
    pub fn from_basis_claim(n: usize, basis: Vec<IntVector>) -> Result<Self, ExactError> {
        if basis.is_empty() {
            return Ok(RationalSubspace::zero(n));
        }
        if basis.iter().any(|v| v.len() != n) {
            return Err(ExactError::DimensionMismatch);
        }
        let w = wedge_int(&basis)?;
        if w.iter().all(|x| x.is_zero()) {
            return Err(ExactError::LinearlyDependent);
        }
        let height_sq = norm_sq(&w);
        Ok(RationalSubspace { n, basis, plucker: primitive_plucker(&w), height_sq })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[IntVector] {
        &self.basis
    }

    pub fn plucker(&self) -> &[BigInt] {
        &self.plucker
    }

    pub fn plucker_multivector(&self) -> MultiVector {
        MultiVector::from_integers(self.n, self.dim(), &self.plucker).expect("plucker length")
    }

    pub fn height_sq(&self) -> &BigInt {
        &self.height_sq
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }
}

/// Saturation of the lattice spanned by `spanning`: a Z-basis of `Span ∩ Z^n`,
/// in row Hermite normal form.
pub fn saturate(spanning: &[IntVector]) -> Result<RationalSubspace, ExactError> {
    let Some(first) = spanning.first() else { return Err(ExactError::Empty) };
    let n = first.len();
    if spanning.iter().any(|v| v.len() != n) {
        return Err(ExactError::DimensionMismatch);
    }
    let nonzero: Vec<IntVector> = spanning.iter().filter(|v| v.iter().any(|x| !x.is_zero())).cloned().collect();
    if nonzero.is_empty() {
        return Err(ExactError::ZeroSpan);
    }
    let basis = if rank(&nonzero) == 1 {
        let v = &nonzero[0];
        let c = content(v);
        vec![sign_normalize(v.iter().map(|x| x / &c).collect())]
    } else {
        let perp = integer_kernel(&nonzero, n);
        if perp.is_empty() {
            return Ok(RationalSubspace::full(n));
        }
        row_hnf(&integer_kernel(&perp, n))
    };
    let s = RationalSubspace::from_basis_claim(n, basis)?;
    debug_assert!(s.plucker.iter().zip(wedge_int(&s.basis).unwrap().iter()).all(|(a, b)| a.abs() == b.abs()));
    Ok(s)
}

pub fn height_sq(b: &RationalSubspace) -> BigInt {
    b.height_sq.clone()
}

/// Saturated basis of the orthogonal complement.
pub fn orth_complement(b: &RationalSubspace) -> Result<RationalSubspace, ExactError> {
    let e = b.dim();
    if e == 0 || e == b.n {
        return Err(ExactError::DimensionOutOfRange);
    }
    let k = integer_kernel(&b.basis, b.n);
    RationalSubspace::from_basis_claim(b.n, row_hnf(&k))
}

#[derive(Clone, Debug)]
pub struct ProjectionSplit {
    /// `ker(p) ∩ B`.
    pub ker_part: RationalSubspace,
    /// `p(B)`.
    pub image: RationalSubspace,
    /// `H(B)² = H(ker(p) ∩ B)² · H(p(B))²`.
    pub factorization_holds: bool,
    /// Whether `ker(p) ⊆ B`, the hypothesis under which the factorization is a theorem.
    pub kernel_contained: bool,
}

/// Orthogonal projection onto the coordinates `keep` (0-based).
pub fn coord_project(b: &RationalSubspace, keep: &[usize]) -> Result<ProjectionSplit, ExactError> {
    let n = b.n;
    if keep.iter().any(|&i| i >= n) {
        return Err(ExactError::DimensionOutOfRange);
    }
    let kept = |i: usize| keep.contains(&i);
    let projected: Vec<IntVector> = b
        .basis
        .iter()
        .map(|v| v.iter().enumerate().map(|(i, x)| if kept(i) { x.clone() } else { BigInt::zero() }).collect())
        .collect();
    let image = if projected.iter().all(|v| v.iter().all(|x| x.is_zero())) {
        RationalSubspace::zero(n)
    } else {
        saturate(&projected)?
    };
    // c · basis vanishes on `keep`  ⇔  c ∈ kernel of the kept-columns matrix
    let e = b.dim();
    let ker_part = if e == 0 {
        RationalSubspace::zero(n)
    } else {
        let cols: Vec<IntVector> = (0..n).filter(|&i| kept(i)).map(|i| b.basis.iter().map(|v| v[i].clone()).collect()).collect();
        let coeffs = integer_kernel(&cols, e);
        let vecs: Vec<IntVector> = coeffs
            .iter()
            .map(|c| (0..n).map(|i| c.iter().zip(&b.basis).map(|(a, v)| a * &v[i]).sum()).collect())
            .collect();
        if vecs.is_empty() {
            RationalSubspace::zero(n)
        } else {
            saturate(&vecs)?
        }
    };
    let factorization_holds = &b.height_sq == &(&ker_part.height_sq * &image.height_sq);
    let kernel_contained = (0..n).filter(|&i| !kept(i)).all(|i| {
        let mut y = vec![BigInt::zero(); n];
        y[i] = BigInt::one();
        membership_by_wedge(&y, b).map(|m| m == Membership::InB).unwrap_or(false)
    });
    Ok(ProjectionSplit { ker_part, image, factorization_holds, kernel_contained })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    InB,
    Inconclusive,
}

/// Exact `‖Y ∧ X₁ ∧ … ∧ X_e‖²`; an integer value below 1 is 0, which forces `Y ∈ B`.
pub fn wedge_residual_sq(y: &[BigInt], b: &RationalSubspace) -> Result<BigInt, ExactError> {
    if y.len() != b.n {
        return Err(ExactError::DimensionMismatch);
    }
    if y.iter().all(|x| x.is_zero()) {
        return Err(ExactError::ZeroVector);
    }
    let mut vs = Vec::with_capacity(b.dim() + 1);
    vs.push(y.to_vec());
    vs.extend(b.basis.iter().cloned());
    Ok(gram_det(&vs))
}

pub fn membership_by_wedge(y: &[BigInt], b: &RationalSubspace) -> Result<Membership, ExactError> {
    let r = wedge_residual_sq(y, b)?;
    Ok(if r < BigInt::one() { Membership::InB } else { Membership::Inconclusive })
}

impl Serialize for RationalSubspace {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let basis: Vec<Vec<String>> = self.basis.iter().map(|v| v.iter().map(|x| x.to_string()).collect()).collect();
        let plucker: Vec<String> = self.plucker.iter().map(|x| x.to_string()).collect();
        let mut st = s.serialize_struct("RationalSubspace", 6)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("e", &self.dim())?;
        st.serialize_field("basis", &basis)?;
        st.serialize_field("plucker", &plucker)?;
        st.serialize_field("pluckerIndexOrder", "colex")?;
        st.serialize_field("heightSq", &self.height_sq.to_string())?;
        st.end()
    }
}
