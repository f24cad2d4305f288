use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::One;

use crate::dyadic::{ratio_bounds, Dyadic};
use crate::CertError;

/// Closed interval `[lo, hi]` with dyadic endpoints. Every operation rounds outward
/// to `prec` mantissa bits, so the true value is always enclosed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    lo: Dyadic,
    hi: Dyadic,
    prec: u32,
}

impl Interval {
    pub fn new(lo: Dyadic, hi: Dyadic, prec: u32) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        Interval { lo: lo.round_down(prec), hi: hi.round_up(prec), prec }
    }

    pub fn point(d: Dyadic, prec: u32) -> Self {
        Interval::new(d.clone(), d, prec)
    }

    pub fn zero(prec: u32) -> Self {
        Interval::point(Dyadic::zero(), prec)
    }

    pub fn one(prec: u32) -> Self {
        Interval::point(Dyadic::from_int(BigInt::one()), prec)
    }

    pub fn from_int(n: &BigInt, prec: u32) -> Self {
        Interval::point(Dyadic::from_int(n.clone()), prec)
    }

    pub fn from_i64(n: i64, prec: u32) -> Self {
        Interval::from_int(&BigInt::from(n), prec)
    }

    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u32) -> Self {
        let (lo, hi) = ratio_bounds(num, den, prec);
        Interval::new(lo, hi, prec)
    }

    pub fn from_rational(r: &BigRational, prec: u32) -> Self {
        Interval::from_ratio(r.numer(), r.denom(), prec)
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        Interval::new(self.lo.clone(), self.hi.clone(), prec)
    }

    pub fn hull(&self, o: &Interval) -> Interval {
        let lo = if self.lo <= o.lo { self.lo.clone() } else { o.lo.clone() };
        let hi = if self.hi >= o.hi { self.hi.clone() } else { o.hi.clone() };
        Interval::new(lo, hi, self.prec.max(o.prec))
    }

    pub fn neg(&self) -> Interval {
        Interval::new(self.hi.neg(), self.lo.neg(), self.prec)
    }

    pub fn add(&self, o: &Interval) -> Interval {
        let p = self.prec.max(o.prec);
        Interval::new(self.lo.add(&o.lo), self.hi.add(&o.hi), p)
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        let p = self.prec.max(o.prec);
        let c = [
            self.lo.mul(&o.lo),
            self.lo.mul(&o.hi),
            self.hi.mul(&o.lo),
            self.hi.mul(&o.hi),
        ];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Interval::new(lo, hi, p)
    }

    /// Multiplication by `2^k`, exact.
    pub fn shl(&self, k: i64) -> Interval {
        Interval { lo: self.lo.shl(k), hi: self.hi.shl(k), prec: self.prec }
    }

    pub fn recip(&self) -> Result<Interval, CertError> {
        if self.contains_zero() {
            return Err(CertError::DivisionByZero);
        }
        let p = self.prec;
        let inv = |d: &Dyadic| {
            // 1 / (m 2^e) = (1/m) 2^-e
            let (lo, hi) = ratio_bounds(&BigInt::one(), &d.mant, p + 2);
            (lo.shl(-d.exp), hi.shl(-d.exp))
        };
        let (a_lo, a_hi) = inv(&self.hi);
        let (b_lo, b_hi) = inv(&self.lo);
        // 1/x is decreasing on each sign branch
        let lo = if a_lo <= b_lo { a_lo } else { b_lo };
        let hi = if a_hi >= b_hi { a_hi } else { b_hi };
        Ok(Interval::new(lo, hi, p))
    }

    pub fn div(&self, o: &Interval) -> Result<Interval, CertError> {
        Ok(self.mul(&o.recip()?))
    }

    pub fn pow_u(&self, k: u32) -> Interval {
        if k == 0 {
            return Interval::one(self.prec);
        }
        if self.lo.sign() != Sign::Minus {
            let mut acc = Interval::one(self.prec);
            let mut base = self.clone();
            let mut e = k;
            while e > 0 {
                if e & 1 == 1 {
                    acc = acc.mul(&base);
                }
                base = base.mul(&base);
                e >>= 1;
            }
            acc
        } else {
            let mut acc = self.clone();
            for _ in 1..k {
                acc = acc.mul(self);
            }
            acc
        }
    }

    pub fn sqrt(&self) -> Result<Interval, CertError> {
        if self.hi.sign() == Sign::Minus {
            return Err(CertError::Domain("square root of a negative interval"));
        }
        let p = self.prec;
        let lo = if self.lo.sign() == Sign::Plus {
            sqrt_dyadic(&self.lo, p, false)
        } else {
            Dyadic::zero()
        };
        let hi = sqrt_dyadic(&self.hi, p, true);
        Ok(Interval::new(lo, hi, p))
    }

    pub fn contains_zero(&self) -> bool {
        self.lo.sign() != Sign::Plus && self.hi.sign() != Sign::Minus
    }

    pub fn is_positive(&self) -> bool {
        self.lo.sign() == Sign::Plus
    }

    pub fn is_negative(&self) -> bool {
        self.hi.sign() == Sign::Minus
    }

    /// `Some(ordering)` when every point of `self` compares the same way with every
    /// point of `o`; `None` when the intervals overlap.
    pub fn compare(&self, o: &Interval) -> Option<Ordering> {
        if self.hi < o.lo {
            Some(Ordering::Less)
        } else if self.lo > o.hi {
            Some(Ordering::Greater)
        } else if self.lo == self.hi && o.lo == o.hi && self.lo == o.lo {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn compare_rational(&self, r: &BigRational) -> Option<Ordering> {
        let a = self.lo.cmp_rational(r);
        let b = self.hi.cmp_rational(r);
        if a == b {
            Some(a)
        } else {
            None
        }
    }

    pub fn contains_rational(&self, r: &BigRational) -> bool {
        self.lo.cmp_rational(r) != Ordering::Greater && self.hi.cmp_rational(r) != Ordering::Less
    }

    pub fn contains(&self, o: &Interval) -> bool {
        self.lo <= o.lo && o.hi <= self.hi
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    /// True when `hi - lo ≤ 2^-bits · max(|lo|, |hi|)`, or the interval is the point 0.
    pub fn rel_width_within(&self, bits: u32) -> bool {
        let w = self.width();
        if w.is_zero() {
            return true;
        }
        let m = if self.lo.abs() >= self.hi.abs() { self.lo.abs() } else { self.hi.abs() };
        w <= m.shl(-(bits as i64))
    }

    /// Absolute width at most `2^-bits`.
    pub fn abs_width_within(&self, bits: u32) -> bool {
        self.width() <= Dyadic::from_int(BigInt::one()).shl(-(bits as i64))
    }

    pub fn mid_f64_lossy(&self) -> f64 {
        (self.lo.to_f64_lossy() + self.hi.to_f64_lossy()) / 2.0
    }

    /// Decimal rendering `[lo, hi]` with `digits` significant digits, rounded outward.
    pub fn to_decimal_pair(&self, digits: usize) -> (String, String) {
        (
            crate::format::to_sci(&self.lo, digits, false),
            crate::format::to_sci(&self.hi, digits, true),
        )
    }

    pub fn clamp_lower(&self, floor: &Dyadic) -> Interval {
        if &self.lo < floor {
            let hi = if &self.hi < floor { floor.clone() } else { self.hi.clone() };
            Interval::new(floor.clone(), hi, self.prec)
        } else {
            self.clone()
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.to_decimal_pair(12);
        write!(f, "[{a}, {b}]")
    }
}

fn sqrt_dyadic(d: &Dyadic, prec: u32, up: bool) -> Dyadic {
    if d.is_zero() {
        return Dyadic::zero();
    }
    let mut m = d.mant.clone();
    let mut e = d.exp;
    if e.rem_euclid(2) != 0 {
        m <<= 1u32;
        e -= 1;
    }
    let want = 2 * prec as i64 + 4;
    let have = m.bits() as i64;
    if have < want {
        let k = (want - have + 1) / 2;
        m <<= (2 * k) as u64;
        e -= 2 * k;
    }
    let s = m.sqrt();
    let s = if up && &s * &s < m { s + 1 } else { s };
    Dyadic::new(s, e / 2)
}
