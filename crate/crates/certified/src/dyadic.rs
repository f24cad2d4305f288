//! Dyadic numbers `mant * 2^exp` with directed rounding to a mantissa budget.

use std::cmp::Ordering;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dyadic {
    pub mant: BigInt,
    pub exp: i64,
}

/// Floor of `m / 2^s`.
pub(crate) fn shr_floor(m: &BigInt, s: u64) -> BigInt {
    if s == 0 {
        return m.clone();
    }
    if m.sign() != Sign::Minus {
        m >> s
    } else {
        -((-m - BigInt::one()) >> s) - BigInt::one()
    }
}

/// Ceiling of `m / 2^s`.
pub(crate) fn shr_ceil(m: &BigInt, s: u64) -> BigInt {
    -shr_floor(&-m, s)
}

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic { mant: BigInt::zero(), exp: 0 }
    }

    pub fn from_int(m: BigInt) -> Self {
        Dyadic { mant: m, exp: 0 }
    }

    pub fn new(mant: BigInt, exp: i64) -> Self {
        Dyadic { mant, exp }
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn sign(&self) -> Sign {
        self.mant.sign()
    }

    /// Position of the leading bit: `|x| ∈ [2^(mag-1), 2^mag)`. Zero maps to `i64::MIN`.
    pub fn magnitude(&self) -> i64 {
        if self.mant.is_zero() {
            i64::MIN
        } else {
            self.mant.bits() as i64 + self.exp
        }
    }

    pub fn round_down(&self, prec: u32) -> Dyadic {
        let b = self.mant.bits();
        if b <= prec as u64 {
            return self.clone();
        }
        let s = b - prec as u64;
        Dyadic { mant: shr_floor(&self.mant, s), exp: self.exp + s as i64 }
    }

    pub fn round_up(&self, prec: u32) -> Dyadic {
        let b = self.mant.bits();
        if b <= prec as u64 {
            return self.clone();
        }
        let s = b - prec as u64;
        Dyadic { mant: shr_ceil(&self.mant, s), exp: self.exp + s as i64 }
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic { mant: -&self.mant, exp: self.exp }
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic { mant: self.mant.abs(), exp: self.exp }
    }

    pub fn add(&self, o: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(o.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &o.mant << (o.exp - e) as u64;
        Dyadic { mant: a + b, exp: e }
    }

    pub fn sub(&self, o: &Dyadic) -> Dyadic {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Dyadic) -> Dyadic {
        Dyadic { mant: &self.mant * &o.mant, exp: self.exp + o.exp }
    }

    pub fn shl(&self, k: i64) -> Dyadic {
        Dyadic { mant: self.mant.clone(), exp: self.exp + k }
    }

    /// Exact rational value. Only sensible for moderate exponents.
    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as u64)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as u64)
        }
    }

    /// Compares `self` with `p/q` exactly (`q > 0`).
    pub fn cmp_ratio(&self, p: &BigInt, q: &BigInt) -> Ordering {
        debug_assert!(q.is_positive());
        let lhs = &self.mant * q;
        if self.exp >= 0 {
            (lhs << self.exp as u64).cmp(p)
        } else {
            lhs.cmp(&(p << (-self.exp) as u64))
        }
    }

    pub fn cmp_rational(&self, r: &BigRational) -> Ordering {
        self.cmp_ratio(r.numer(), r.denom())
    }

    /// Crude `f64` view, for heuristics and test diagnostics only.
    pub fn to_f64_lossy(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let b = self.mant.bits() as i64;
        let keep = 60i64;
        let (m, e) = if b > keep {
            (shr_floor(&self.mant, (b - keep) as u64), self.exp + b - keep)
        } else {
            (self.mant.clone(), self.exp)
        };
        let mf: f64 = num_traits::ToPrimitive::to_f64(&m).unwrap_or(f64::NAN);
        if e > 2000 {
            return mf.signum() * f64::INFINITY;
        }
        if e < -2000 {
            return 0.0;
        }
        mf * (2f64).powi(e as i32)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, o: &Self) -> Ordering {
        let (sa, sb) = (self.sign(), o.sign());
        let rank = |s: Sign| match s {
            Sign::Minus => 0,
            Sign::NoSign => 1,
            Sign::Plus => 2,
        };
        if rank(sa) != rank(sb) {
            return rank(sa).cmp(&rank(sb));
        }
        if sa == Sign::NoSign {
            return Ordering::Equal;
        }
        let (ma, mb) = (self.magnitude(), o.magnitude());
        if ma != mb {
            let c = ma.cmp(&mb);
            return if sa == Sign::Plus { c } else { c.reverse() };
        }
        let e = self.exp.min(o.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &o.mant << (o.exp - e) as u64;
        a.cmp(&b)
    }
}

/// Floor and ceiling of `num/den` as dyadics with about `prec` significant bits.
pub(crate) fn ratio_bounds(num: &BigInt, den: &BigInt, prec: u32) -> (Dyadic, Dyadic) {
    assert!(!den.is_zero(), "division by zero");
    let (num, den) = if den.is_negative() { (-num, -den) } else { (num.clone(), den.clone()) };
    if num.is_zero() {
        return (Dyadic::zero(), Dyadic::zero());
    }
    // scale so the quotient carries prec + 2 bits
    let k = prec as i64 + 2 - (num.bits() as i64 - den.bits() as i64);
    let (n2, d2) = if k >= 0 {
        (num << k as u64, den)
    } else {
        (num, den << (-k) as u64)
    };
    let (q, r) = n2.div_mod_floor(&d2);
    let lo = Dyadic::new(q.clone(), -k);
    let hi = if r.is_zero() { lo.clone() } else { Dyadic::new(q + 1, -k) };
    (lo, hi)
}
