//! `Ω_{(e,k)}` as monomial lists, its index set `χ(e,k)` and exact Jacobians.

use std::collections::BTreeSet;

use exponents::v_q;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{f_of, in_v, SpectrumError, SpectrumTarget};

/// `(i, ℓ)` for `β_{i,ℓ}`, both 1-based.
pub type Var = (usize, usize);
/// A square-free monomial with coefficient 1; the empty list is the constant 1.
pub type Monomial = Vec<Var>;

fn check_pair(e: usize, k: usize, d: usize, m: usize) -> Result<(), SpectrumError> {
    let n = d * (m + 1);
    if !in_v(e, k, d, n) {
        return Err(SpectrumError::NotInV { e, k, d, n });
    }
    if e >= k * (m + 1) {
        return Err(SpectrumError::TooLarge { e, k, m });
    }
    Ok(())
}

/// `χ(e,k) = (⟦1+f+d−k, u+d−k⟧ × ⟦1, v+1⟧) ∪ (⟦u+1+d−k, d⟧ × ⟦1, v⟧)`.
pub fn chi(e: usize, k: usize, d: usize, m: usize) -> Result<BTreeSet<Var>, SpectrumError> {
    check_pair(e, k, d, m)?;
    let (v, u, f) = (e / k, e % k, f_of(e, k, m));
    let mut out = BTreeSet::new();
    for q in 1 + f + d - k..=u + d - k {
        out.extend((1..=v + 1).map(|l| (q, l)));
    }
    for q in u + 1 + d - k..=d {
        out.extend((1..=v).map(|l| (q, l)));
    }
    Ok(out)
}

/// `χ(e,k)` by its membership test: `q ≥ 1+f+d−k` and `ℓ ≤ v_{q+k−d}(e,k)`.
pub fn chi_from_membership(e: usize, k: usize, d: usize, m: usize) -> Result<BTreeSet<Var>, SpectrumError> {
    check_pair(e, k, d, m)?;
    let (vq, f) = (v_q(e, k)?, f_of(e, k, m));
    let mut out = BTreeSet::new();
    for q in (1 + f + d - k).max(1 + d - k)..=d {
        for l in 1..=m {
            if l <= vq[q + k - d - 1] {
                out.insert((q, l));
            }
        }
    }
    Ok(out)
}

/// The polynomials `Ω_{(e,k)}`, one per member of `U`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaMap {
    pub d: usize,
    pub m: usize,
    pub polys: Vec<((usize, usize), Vec<Monomial>)>,
}

impl OmegaMap {
    pub fn new(d: usize, m: usize, u: &[(usize, usize)]) -> Result<Self, SpectrumError> {
        let mut polys = Vec::with_capacity(u.len());
        for &(e, k) in u {
            check_pair(e, k, d, m)?;
            let (vq, f) = (v_q(e, k)?, f_of(e, k, m));
            let monos = (1 + f..=k)
                .map(|q| (1..=vq[q - 1]).map(|l| (q + d - k, l)).collect())
                .collect();
            polys.push(((e, k), monos));
        }
        Ok(OmegaMap { d, m, polys })
    }

    pub fn for_target(t: &SpectrumTarget) -> Result<Self, SpectrumError> {
        Self::new(t.d, t.m, &t.u)
    }

    /// Every variable appearing in the `idx`-th polynomial.
    pub fn support(&self, idx: usize) -> BTreeSet<Var> {
        self.polys[idx].1.iter().flatten().copied().collect()
    }

    pub fn eval(&self, beta: &[Vec<BigRational>]) -> Result<Vec<BigRational>, SpectrumError> {
        check_beta(beta, self.d, self.m)?;
        Ok(self.polys.iter().map(|(_, ms)| ms.iter().map(|mo| eval_mono(mo, beta)).sum()).collect())
    }

    /// Partial derivatives by differentiating the monomial lists term by term.
    pub fn jacobian(&self, beta: &[Vec<BigRational>]) -> Result<Vec<Vec<BigRational>>, SpectrumError> {
        check_beta(beta, self.d, self.m)?;
        Ok(self
            .polys
            .iter()
            .map(|(_, ms)| {
                vars(self.d, self.m)
                    .map(|x| ms.iter().filter_map(|mo| derive(mo, x)).map(|mo| eval_mono(&mo, beta)).sum())
                    .collect()
            })
            .collect())
    }
}

/// Columns run over `(i, ℓ)` lexicographically, so `β_{i,ℓ}` is column `(i−1)m + ℓ−1`.
fn vars(d: usize, m: usize) -> impl Iterator<Item = Var> {
    (1..=d).flat_map(move |i| (1..=m).map(move |l| (i, l)))
}

fn derive(mo: &Monomial, x: Var) -> Option<Monomial> {
    mo.contains(&x).then(|| mo.iter().copied().filter(|&y| y != x).collect())
}

fn eval_mono(mo: &Monomial, beta: &[Vec<BigRational>]) -> BigRational {
    mo.iter().fold(BigRational::one(), |acc, &(i, l)| acc * &beta[i - 1][l - 1])
}

pub(crate) fn check_beta(beta: &[Vec<BigRational>], d: usize, m: usize) -> Result<(), SpectrumError> {
    if beta.len() != d || beta.iter().any(|r| r.len() != m || r.iter().any(|x| !x.is_positive())) {
        return Err(SpectrumError::Beta);
    }
    Ok(())
}

pub fn omega_eval(t: &SpectrumTarget, beta: &[Vec<BigRational>]) -> Result<Vec<BigRational>, SpectrumError> {
    OmegaMap::for_target(t)?.eval(beta)
}

pub fn jacobian_symbolic(t: &SpectrumTarget, beta: &[Vec<BigRational>]) -> Result<Vec<Vec<BigRational>>, SpectrumError> {
    OmegaMap::for_target(t)?.jacobian(beta)
}

/// `∂Ω_{(e,k)}/∂β_{q,ℓ} = Π_{p≠ℓ, p≤v_{q+k−d}} β_{q,p}` on `χ(e,k)`, zero elsewhere.
pub fn jacobian_closed_form(t: &SpectrumTarget, beta: &[Vec<BigRational>]) -> Result<Vec<Vec<BigRational>>, SpectrumError> {
    check_beta(beta, t.d, t.m)?;
    let (d, m) = (t.d, t.m);
    let mut out = Vec::with_capacity(t.u.len());
    for &(e, k) in &t.u {
        let x = chi(e, k, d, m)?;
        let vq = v_q(e, k)?;
        let row = vars(d, m)
            .map(|(q, l)| {
                if !x.contains(&(q, l)) {
                    return BigRational::zero();
                }
                (1..=vq[q + k - d - 1]).filter(|&p| p != l).fold(BigRational::one(), |a, p| a * &beta[q - 1][p - 1])
            })
            .collect();
        out.push(row);
    }
    Ok(out)
}

/// `Ω′_{(e,k)} = 1 / Σ_q 1/P_q` over the monomials `P_q` of `Ω_{(e,k)}`. Unlike `Ω` it is
/// not affine in any variable, so it gives central differences something to converge on.
pub fn omega_prime_eval(t: &SpectrumTarget, beta: &[Vec<BigRational>]) -> Result<Vec<BigRational>, SpectrumError> {
    let om = OmegaMap::for_target(t)?;
    check_beta(beta, t.d, t.m)?;
    Ok(om
        .polys
        .iter()
        .map(|(_, ms)| ms.iter().map(|mo| eval_mono(mo, beta).recip()).sum::<BigRational>().recip())
        .collect())
}

/// `∂Ω′/∂β = Ω′² Σ_q (∂P_q/∂β) / P_q²`.
pub fn omega_prime_jacobian(t: &SpectrumTarget, beta: &[Vec<BigRational>]) -> Result<Vec<Vec<BigRational>>, SpectrumError> {
    let om = OmegaMap::for_target(t)?;
    let vals = omega_prime_eval(t, beta)?;
    Ok(om
        .polys
        .iter()
        .zip(vals)
        .map(|((_, ms), w)| {
            let w2 = &w * &w;
            vars(t.d, t.m)
                .map(|x| {
                    let s: BigRational = ms
                        .iter()
                        .filter_map(|mo| {
                            let dp = eval_mono(&derive(mo, x)?, beta);
                            let p = eval_mono(mo, beta);
                            Some(dp / (&p * &p))
                        })
                        .sum();
                    &w2 * s
                })
                .collect()
        })
        .collect())
}

/// `(F(β + h·δ_x) − F(β − h·δ_x)) / 2h`, exactly.
pub fn finite_difference<F>(
    f: F,
    beta: &[Vec<BigRational>],
    x: Var,
    h: &BigRational,
) -> Result<Vec<BigRational>, SpectrumError>
where
    F: Fn(&[Vec<BigRational>]) -> Result<Vec<BigRational>, SpectrumError>,
{
    let shifted = |s: &BigRational| {
        let mut b = beta.to_vec();
        b[x.0 - 1][x.1 - 1] += s;
        b
    };
    let plus = f(&shifted(h))?;
    let minus = f(&shifted(&-h))?;
    let two_h = h * BigRational::from_integer(BigInt::from(2));
    Ok(plus.into_iter().zip(minus).map(|(a, b)| (a - b) / &two_h).collect())
}
