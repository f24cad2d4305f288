use certified::{Interval, PrecisionConfig};
use exactlin::matrix::{clear_denominators, gram_det, norm_sq, rank_rational};
use exactlin::RationalSubspace;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::poly::{charpoly, matmul};
use crate::roots::{roots_in_unit_interval, Root};
use crate::AngleError;

fn to_ints(v: &[BigRational]) -> Vec<BigInt> {
    clear_denominators(v)
}

/// `ω(X,Y)² = ‖X∧Y‖²/(‖X‖²‖Y‖²)`.
pub fn angle_of_vectors(x: &[BigRational], y: &[BigRational]) -> Result<BigRational, AngleError> {
    if x.len() != y.len() {
        return Err(AngleError::DimensionMismatch);
    }
    let (xi, yi) = (to_ints(x), to_ints(y));
    let (nx, ny) = (norm_sq(&xi), norm_sq(&yi));
    if nx.is_zero() || ny.is_zero() {
        return Err(AngleError::ZeroVector);
    }
    let d: BigInt = xi.iter().zip(&yi).map(|(a, b)| a * b).sum();
    let wedge = &nx * &ny - &d * &d;
    Ok(BigRational::new(wedge, nx * ny))
}

/// Numerator and denominator of `ω₁(Span Y, B)²`, left unreduced (large inputs make
/// the gcd the dominant cost).
pub fn line_sine_sq_parts(y: &[BigInt], b: &RationalSubspace) -> Result<(BigInt, BigInt), AngleError> {
    if y.len() != b.n() {
        return Err(AngleError::DimensionMismatch);
    }
    let ny = norm_sq(y);
    if ny.is_zero() {
        return Err(AngleError::ZeroVector);
    }
    if b.is_zero() {
        return Ok((BigInt::one(), BigInt::one()));
    }
    let mut vs = vec![y.to_vec()];
    vs.extend(b.basis().iter().cloned());
    Ok((gram_det(&vs), ny * gram_det(b.basis())))
}

/// `ω₁(Span Y, B)² = ‖Y − proj_B Y‖²/‖Y‖²`.
pub fn first_angle_line_to_subspace(y: &[BigRational], b: &RationalSubspace) -> Result<BigRational, AngleError> {
    let (num, den) = line_sine_sq_parts(&to_ints(y), b)?;
    Ok(BigRational::new(num, den))
}

/// One angle: the interval for `ω`, the interval for `ω²`, and `ω²` itself when exact.
#[derive(Clone, Debug)]
pub struct AngleEntry {
    pub omega: Interval,
    pub omega_sq: Interval,
    pub exact_sq: Option<BigRational>,
}

impl AngleEntry {
    pub fn exact(sq: BigRational, prec: u32) -> Result<Self, AngleError> {
        let omega_sq = Interval::from_rational(&sq, prec);
        let omega = omega_sq.sqrt().map_err(AngleError::Cert)?;
        Ok(AngleEntry { omega, omega_sq, exact_sq: Some(sq) })
    }

    pub(crate) fn bracket(lo: &BigRational, hi: &BigRational, prec: u32) -> Result<Self, AngleError> {
        let omega_sq = Interval::from_rational(lo, prec).hull(&Interval::from_rational(hi, prec));
        let omega = omega_sq.sqrt().map_err(AngleError::Cert)?;
        Ok(AngleEntry { omega, omega_sq, exact_sq: None })
    }

    pub fn is_exact(&self) -> bool {
        self.exact_sq.is_some()
    }
}

impl Serialize for AngleEntry {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let (lo, hi) = self.omega.to_decimal_pair(20);
        let mut st = s.serialize_struct("AngleEntry", 4)?;
        st.serialize_field("lo", &lo)?;
        st.serialize_field("hi", &hi)?;
        st.serialize_field("exact", &self.is_exact())?;
        st.serialize_field("exactSq", &self.exact_sq.as_ref().map(|r| r.to_string()))?;
        st.end()
    }
}

/// `ω₁ ≤ … ≤ ω_t`, `t = min(d, e)`.
#[derive(Clone, Debug, serde::Serialize)]
pub struct AngleReport {
    pub d: usize,
    pub e: usize,
    pub omegas: Vec<AngleEntry>,
}

fn gram(vs: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    vs.iter().map(|a| vs.iter().map(|b| a.iter().zip(b).map(|(x, y)| x * y).sum()).collect()).collect()
}

fn cross(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    a.iter().map(|x| b.iter().map(|y| x.iter().zip(y).map(|(p, q)| p * q).sum()).collect()).collect()
}

fn transpose(m: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let cols = m.first().map_or(0, |r| r.len());
    (0..cols).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

/// Inverse of a nonsingular rational matrix by Gauss–Jordan.
pub(crate) fn inverse(m: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(c, p);
        let inv = a[c][c].recip();
        for x in a[c].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                let pivot = a[c].clone();
                for (x, y) in a[r].iter_mut().zip(pivot) {
                    *x -= &f * y;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// The matrix `I − G_A^{-1} C G_B^{-1} Cᵀ` whose eigenvalues are the squared principal
/// sines, built on the smaller of the two generator sets.
pub(crate) fn sine_matrix(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> Result<Vec<Vec<BigRational>>, AngleError> {
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let gs = inverse(&gram(small)).ok_or(AngleError::RankDeficient)?;
    let gl = inverse(&gram(large)).ok_or(AngleError::RankDeficient)?;
    let c = cross(small, large);
    let p = matmul(&matmul(&gs, &c), &matmul(&gl, &transpose(&c)));
    Ok(p
        .iter()
        .enumerate()
        .map(|(i, r)| r.iter().enumerate().map(|(j, x)| if i == j { BigRational::one() - x } else { -x }).collect())
        .collect())
}

fn check_generators(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> Result<usize, AngleError> {
    let n = a.first().or(b.first()).map(|v| v.len()).ok_or(AngleError::Empty)?;
    if a.is_empty() || b.is_empty() {
        return Err(AngleError::Empty);
    }
    if a.iter().chain(b).any(|v| v.len() != n) {
        return Err(AngleError::DimensionMismatch);
    }
    if rank_rational(a) != a.len() || rank_rational(b) != b.len() {
        return Err(AngleError::RankDeficient);
    }
    Ok(n)
}

/// Sines of the principal angles between `Span A` and `Span B`, ascending.
pub fn principal_sines(a: &[Vec<BigRational>], b: &[Vec<BigRational>], cfg: &PrecisionConfig) -> Result<AngleReport, AngleError> {
    check_generators(a, b)?;
    let s = sine_matrix(a, b)?;
    let roots = roots_in_unit_interval(&charpoly(&s), cfg.working_bits / 2 + 8);
    let mut omegas = Vec::new();
    for r in &roots {
        let entry = match r {
            Root::Exact(x, _) => AngleEntry::exact(x.clone(), cfg.working_bits)?,
            Root::Bracket(lo, hi, _) => AngleEntry::bracket(lo, hi, cfg.working_bits)?,
        };
        for _ in 0..r.multiplicity() {
            omegas.push(entry.clone());
        }
    }
    if omegas.len() != s.len() {
        return Err(AngleError::Internal(format!("found {} of {} roots", omegas.len(), s.len())));
    }
    Ok(AngleReport { d: a.len(), e: b.len(), omegas })
}

/// `ψ_j = ω_{j+g}`: drops the first `g(d,e,n)` angles, which must vanish.
pub fn psi_from_omegas(report: &AngleReport, d: usize, e: usize, n: usize) -> Result<Vec<AngleEntry>, AngleError> {
    let g = (d + e).saturating_sub(n);
    if g > report.omegas.len() {
        return Err(AngleError::IndexOutOfRange);
    }
    if report.omegas[..g].iter().any(|w| !w.omega.contains_zero()) {
        return Err(AngleError::Internal("an angle forced to vanish is bounded away from 0".into()));
    }
    Ok(report.omegas[g..].to_vec())
}

/// Exact `‖a∧b‖²/(‖a‖²‖b‖²)` for generator sets, the product of all squared sines.
pub fn wedge_ratio_sq(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> Result<BigRational, AngleError> {
    check_generators(a, b)?;
    let ai: Vec<Vec<BigInt>> = a.iter().map(|v| to_ints(v)).collect();
    let bi: Vec<Vec<BigInt>> = b.iter().map(|v| to_ints(v)).collect();
    let mut all = ai.clone();
    all.extend(bi.iter().cloned());
    Ok(BigRational::new(gram_det(&all), gram_det(&ai) * gram_det(&bi)))
}
