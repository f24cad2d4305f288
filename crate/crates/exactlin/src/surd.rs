//! Exact arithmetic in `Q(√5)`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// `a + b√5` with rational `a`, `b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Surd5 {
    pub a: BigRational,
    pub b: BigRational,
}

impl Surd5 {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        Surd5 { a, b }
    }

    pub fn rational(a: BigRational) -> Self {
        Surd5 { a, b: BigRational::zero() }
    }

    pub fn from_int(a: i64) -> Self {
        Surd5::rational(BigRational::from_integer(a.into()))
    }

    /// `(3 + √5)/2 = 2 + (√5 − 1)/2`, the square of the golden ratio.
    pub fn golden_square() -> Self {
        let half = BigRational::new(1.into(), 2.into());
        Surd5 { a: BigRational::from_integer(3.into()) * &half, b: half }
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_rational().then_some(&self.a)
    }

    pub fn conj(&self) -> Surd5 {
        Surd5 { a: self.a.clone(), b: -&self.b }
    }

    /// `a² − 5b²`.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - BigRational::from_integer(5.into()) * &self.b * &self.b
    }

    pub fn signum(&self) -> Ordering {
        let sa = self.a.cmp(&BigRational::zero());
        let sb = self.b.cmp(&BigRational::zero());
        use Ordering::*;
        match (sa, sb) {
            (Equal, s) | (s, Equal) => s,
            (Greater, Greater) => Greater,
            (Less, Less) => Less,
            (Greater, Less) => self.norm().cmp(&BigRational::zero()),
            (Less, Greater) => self.norm().cmp(&BigRational::zero()).reverse(),
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn recip(&self) -> Option<Surd5> {
        let nm = self.norm();
        if nm.is_zero() {
            return None;
        }
        Some(Surd5 { a: &self.a / &nm, b: -&self.b / &nm })
    }

    pub fn scale(&self, r: &BigRational) -> Surd5 {
        Surd5 { a: &self.a * r, b: &self.b * r }
    }

    pub fn pow(&self, mut k: u32) -> Surd5 {
        let mut acc = Surd5::from_int(1);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        acc
    }

    pub fn floor(&self) -> BigInt {
        if self.b.is_zero() {
            return self.a.floor().to_integer();
        }
        // self = (A + B√5)/D with integers
        let d = self.a.denom().lcm(self.b.denom());
        let aa = self.a.numer() * (&d / self.a.denom());
        let bb = self.b.numer() * (&d / self.b.denom());
        let s = (BigInt::from(5) * &bb * &bb).sqrt();
        let (lo, hi) = if bb.is_positive() { (&aa + &s, &aa + &s + 1) } else { (&aa - &s - 1, &aa - &s) };
        let mut k = hi.div_floor(&d);
        let kmin = lo.div_floor(&d);
        while k > kmin && (self - &Surd5::rational(BigRational::from_integer(k.clone()))).signum() == Ordering::Less {
            k -= 1;
        }
        k
    }

    pub fn to_f64_lossy(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.a.to_f64().unwrap_or(f64::NAN) + self.b.to_f64().unwrap_or(f64::NAN) * 5f64.sqrt()
    }
}

impl PartialOrd for Surd5 {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Surd5 {
    fn cmp(&self, o: &Self) -> Ordering {
        (self - o).signum()
    }
}

impl<'a> Add<&'a Surd5> for &'a Surd5 {
    type Output = Surd5;
    fn add(self, o: &Surd5) -> Surd5 {
        Surd5 { a: &self.a + &o.a, b: &self.b + &o.b }
    }
}

impl<'a> Sub<&'a Surd5> for &'a Surd5 {
    type Output = Surd5;
    fn sub(self, o: &Surd5) -> Surd5 {
        Surd5 { a: &self.a - &o.a, b: &self.b - &o.b }
    }
}

impl<'a> Mul<&'a Surd5> for &'a Surd5 {
    type Output = Surd5;
    fn mul(self, o: &Surd5) -> Surd5 {
        let five = BigRational::from_integer(5.into());
        Surd5 { a: &self.a * &o.a + five * &self.b * &o.b, b: &self.a * &o.b + &self.b * &o.a }
    }
}

impl Neg for &Surd5 {
    type Output = Surd5;
    fn neg(self) -> Surd5 {
        Surd5 { a: -&self.a, b: -&self.b }
    }
}

impl fmt::Display for Surd5 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.a.is_zero() {
            write!(f, "{}*sqrt(5)", self.b)
        } else {
            write!(f, "{} + {}*sqrt(5)", self.a, self.b)
        }
    }
}

impl From<BigRational> for Surd5 {
    fn from(r: BigRational) -> Self {
        Surd5::rational(r)
    }
}

/// `C_1 = (3+√5)/2`, `C_d = 5n²·C_{d−1}^{2n}`.
pub fn c_constant(d: usize, n: usize) -> Surd5 {
    let mut c = Surd5::golden_square();
    let factor = BigRational::from_integer(BigInt::from(5 * n * n));
    for _ in 1..d {
        c = c.pow(2 * n as u32).scale(&factor);
    }
    c
}

/// Exact test `x ≥ C₁` for rational `x`: `2x − 3 ≥ 0 ∧ (2x − 3)² ≥ 5`.
pub fn at_least_golden_square(x: &BigRational) -> bool {
    let t = BigRational::from_integer(2.into()) * x - BigRational::from_integer(3.into());
    !t.is_negative() && &t * &t >= BigRational::from_integer(5.into())
}

impl Surd5 {
    pub fn one() -> Self {
        Surd5::rational(BigRational::one())
    }
}
