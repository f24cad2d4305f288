//! Logarithms with rigorous enclosures.
//!
//! `ln y = 2 atanh(z)` with `z = (y-1)/(y+1)`, summed in interval arithmetic and
//! closed with an explicit bound on the series tail.

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::dyadic::Dyadic;
use crate::interval::Interval;
use crate::CertError;

/// `2 atanh(z)` for an exact rational `z = p/q` with `|z| ≤ 1/3`.
fn two_atanh(p: &BigInt, q: &BigInt, prec: u32) -> Interval {
    let wp = prec + 24;
    if p.is_zero() {
        return Interval::zero(wp);
    }
    let z = Interval::from_ratio(p, q, wp);
    let z2 = z.mul(&z);
    let mut term = z.clone();
    let mut sum = Interval::zero(wp);
    let mut k: i64 = 0;
    // |z|^(2k+1) < 2^-(wp+4) ends the loop; |z| ≤ 1/3 gives ~wp/3 terms
    let target = Dyadic::from_int(BigInt::one()).shl(-(wp as i64) - 4);
    loop {
        let denom = Interval::from_i64(2 * k + 1, wp);
        sum = sum.add(&term.div(&denom).expect("odd denominator"));
        term = term.mul(&z2);
        k += 1;
        let mag = if term.lo().abs() >= term.hi().abs() { term.lo().abs() } else { term.hi().abs() };
        if mag < target {
            // tail ≤ |z|^(2k+1) / ((2k+1)(1-z²)) ≤ (9/8)|term|
            let bound = mag.mul(&Dyadic::new(BigInt::from(9), -3));
            let tail = Interval::new(bound.neg(), bound, wp);
            sum = sum.add(&tail);
            break;
        }
    }
    sum.shl(1).with_prec(prec)
}

/// Enclosure of `ln 2`.
pub fn ln2(prec: u32) -> Interval {
    two_atanh(&BigInt::one(), &BigInt::from(3), prec)
}

/// Enclosure of `ln(m · 2^e)` for a positive dyadic.
fn ln_dyadic(d: &Dyadic, prec: u32) -> Interval {
    assert!(d.mant.sign() == Sign::Plus, "ln of a non-positive number");
    let b = d.mant.bits() as i64;
    // d = y · 2^k with y = m / 2^(b-1) ∈ [1, 2); shift y into [3/4, 3/2)
    let mut k = d.exp + b - 1;
    let mut den = BigInt::one() << (b - 1) as u64;
    let m = d.mant.clone();
    if &m * BigInt::from(2) >= &den * BigInt::from(3) {
        den <<= 1u32;
        k += 1;
    }
    let p = &m - &den;
    let q = &m + &den;
    let wp = prec + 16 + (64 - k.unsigned_abs().leading_zeros());
    let mut r = two_atanh(&p, &q, wp);
    if k != 0 {
        r = r.add(&ln2(wp).mul(&Interval::from_i64(k, wp)));
    }
    r.with_prec(prec)
}

/// Enclosure of `ln x` over a positive interval.
pub fn ln(x: &Interval, prec: u32) -> Result<Interval, CertError> {
    if x.lo().sign() != Sign::Plus {
        return Err(CertError::Domain("logarithm of a non-positive interval"));
    }
    let lo = ln_dyadic(&x.lo().round_down(prec + 8), prec);
    if x.lo() == x.hi() && x.lo().mant.bits() <= (prec + 8) as u64 {
        return Ok(lo);
    }
    let hi = ln_dyadic(&x.hi().round_up(prec + 8), prec);
    Ok(lo.hull(&hi))
}

/// Enclosure of `ln n` for a positive integer of any size.
pub fn ln_int(n: &BigInt, prec: u32) -> Result<Interval, CertError> {
    if !n.is_positive() {
        return Err(CertError::Domain("logarithm of a non-positive integer"));
    }
    ln(&Interval::from_int(n, prec + 8), prec)
}

/// Enclosure of `ln(num/den)` without forming the reduced fraction.
pub fn ln_ratio(num: &BigInt, den: &BigInt, prec: u32) -> Result<Interval, CertError> {
    Ok(ln_int(num, prec + 4)?.sub(&ln_int(den, prec + 4)?).with_prec(prec))
}

pub fn ln_rational(r: &BigRational, prec: u32) -> Result<Interval, CertError> {
    ln_ratio(r.numer(), r.denom(), prec)
}

/// Enclosure of `log_b(x)` for positive integers given as ratios.
pub fn log_ratio_base(num: &BigInt, den: &BigInt, base: &BigInt, prec: u32) -> Result<Interval, CertError> {
    let lb = ln_int(base, prec + 8)?;
    ln_ratio(num, den, prec + 8)?.div(&lb).map(|r| r.with_prec(prec))
}
