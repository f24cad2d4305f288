//! Dense univariate polynomials over Q and Z, enough for characteristic polynomials,
//! square-free splitting and Sturm root isolation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Ascending coefficients, no trailing zeros (the zero polynomial is empty).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(pub Vec<BigRational>);

impl Poly {
    pub fn new(mut c: Vec<BigRational>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly(c)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn lead(&self) -> &BigRational {
        self.0.last().expect("nonzero polynomial")
    }

    pub fn monic(&self) -> Poly {
        let l = self.lead().clone();
        Poly(self.0.iter().map(|c| c / &l).collect())
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(self.0.iter().enumerate().skip(1).map(|(i, c)| c * BigRational::from_integer(i.into())).collect())
    }

    /// Quotient and remainder.
    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero());
        let mut r = self.0.clone();
        if r.len() < d.0.len() {
            return (Poly(vec![]), self.clone());
        }
        let dl = d.lead();
        let mut q = vec![BigRational::zero(); r.len() - d.0.len() + 1];
        for i in (0..q.len()).rev() {
            let c = &r[i + d.0.len() - 1] / dl;
            if !c.is_zero() {
                for (j, dc) in d.0.iter().enumerate() {
                    r[i + j] -= &c * dc;
                }
            }
            q[i] = c;
        }
        r.truncate(d.0.len() - 1);
        (Poly::new(q), Poly::new(r))
    }

    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    /// Square-free factors `f_1, f_2, …` with `self = c·Π f_i^i` (Yun).
    pub fn squarefree_split(&self) -> Vec<Poly> {
        let f = self.monic();
        let df = f.derivative();
        let mut a = f.gcd(&df);
        let mut b = f.divrem(&a).0;
        let mut c = df.divrem(&a).0;
        let mut out = Vec::new();
        loop {
            let d = c.sub(&b.derivative());
            if b.degree() == 0 {
                break;
            }
            a = b.gcd(&d);
            out.push(a.clone());
            b = b.divrem(&a).0;
            c = d.divrem(&a).0;
        }
        out
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        let z = BigRational::zero();
        Poly::new((0..n).map(|i| self.0.get(i).unwrap_or(&z) - o.0.get(i).unwrap_or(&z)).collect())
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.0.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    /// Positive multiple with coprime integer coefficients.
    pub fn to_primitive_int(&self) -> IntPoly {
        let l = self.0.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let ints: Vec<BigInt> = self.0.iter().map(|c| c.numer() * (&l / c.denom())).collect();
        IntPoly::primitive(ints)
    }
}

/// Integer polynomial, evaluated homogeneously so no fractions appear.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPoly(pub Vec<BigInt>);

impl IntPoly {
    fn primitive(mut c: Vec<BigInt>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        let g = c.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        if !g.is_zero() && !g.is_one() {
            for x in c.iter_mut() {
                *x = &*x / &g;
            }
        }
        IntPoly(c)
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    /// Sign of `p(a/b)` for `b > 0`: sign of `Σ c_i a^i b^{deg−i}`.
    pub fn sign_at(&self, x: &BigRational) -> i8 {
        let (a, b) = (x.numer(), x.denom());
        let mut acc = BigInt::zero();
        let mut bpow = BigInt::one();
        // Horner in a, with the power of b growing as the degree drops
        for c in self.0.iter().rev() {
            acc = acc * a + c * &bpow;
            bpow *= b;
        }
        if acc.is_positive() {
            1
        } else if acc.is_negative() {
            -1
        } else {
            0
        }
    }

    pub fn to_poly(&self) -> Poly {
        Poly::new(self.0.iter().map(|c| BigRational::from_integer(c.clone())).collect())
    }
}

/// Sturm chain of a square-free polynomial, each member scaled to a primitive integer
/// polynomial by a positive factor.
pub struct Sturm(Vec<IntPoly>);

impl Sturm {
    pub fn new(p: &Poly) -> Self {
        let mut chain = vec![p.to_primitive_int()];
        let mut a = p.clone();
        let mut b = p.derivative();
        while !b.is_zero() {
            chain.push(b.to_primitive_int());
            let r = a.divrem(&b).1;
            a = b;
            b = Poly::new(r.0.into_iter().map(|c| -c).collect());
        }
        Sturm(chain)
    }

    pub fn head(&self) -> &IntPoly {
        &self.0[0]
    }

    fn variations(&self, x: &BigRational) -> usize {
        let mut last = 0i8;
        let mut v = 0;
        for p in &self.0 {
            let s = p.sign_at(x);
            if s != 0 {
                if last != 0 && s != last {
                    v += 1;
                }
                last = s;
            }
        }
        v
    }

    /// Number of distinct roots in `(a, b]`.
    pub fn count(&self, a: &BigRational, b: &BigRational) -> usize {
        self.variations(a) - self.variations(b)
    }
}

/// Characteristic polynomial `det(sI − M)` by Faddeev–LeVerrier.
pub fn charpoly(m: &[Vec<BigRational>]) -> Poly {
    let t = m.len();
    let mut coeffs = vec![BigRational::zero(); t + 1];
    coeffs[t] = BigRational::one();
    let mut mk: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); t]; t];
    for k in 1..=t {
        // M_k = M·M_{k−1} + c_{t−k+1} I
        let mut next = matmul(m, &mk);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &coeffs[t - k + 1];
        }
        mk = next;
        let prod = matmul(m, &mk);
        let tr: BigRational = (0..t).map(|i| prod[i][i].clone()).sum();
        coeffs[t - k] = -tr / BigRational::from_integer(k.into());
    }
    Poly::new(coeffs)
}

pub fn matmul(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let (n, k, m) = (a.len(), b.len(), b.first().map_or(0, |r| r.len()));
    (0..n)
        .map(|i| (0..m).map(|j| (0..k).map(|l| &a[i][l] * &b[l][j]).sum()).collect())
        .collect()
}
