use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Pow, Signed, Zero};

use crate::dyadic::Dyadic;

/// Scientific notation with `digits` significant digits. `up` selects the rounding
/// direction (towards +∞ when true, towards −∞ otherwise).
pub fn to_sci(d: &Dyadic, digits: usize, up: bool) -> String {
    let digits = digits.max(1);
    if d.is_zero() {
        return "0".to_string();
    }
    let neg = d.mant.sign() == Sign::Minus;
    // rounding the magnitude away from zero is "up" for positives
    let away = up != neg;
    let mag = d.mant.abs();
    let ten = BigInt::from(10);
    let lower = ten.clone().pow(digits as u32 - 1);
    let upper = ten.clone().pow(digits as u32);
    let approx = ((mag.bits() as f64) + d.exp as f64 - 1.0) * std::f64::consts::LOG10_2;
    let mut dexp = approx.floor() as i64;
    loop {
        let s = digits as i64 - 1 - dexp;
        let mut num = mag.clone();
        let mut den = BigInt::one();
        if d.exp >= 0 {
            num <<= d.exp as u64;
        } else {
            den <<= (-d.exp) as u64;
        }
        if s >= 0 {
            num *= ten.clone().pow(s as u32);
        } else {
            den *= ten.clone().pow((-s) as u32);
        }
        let (q, r) = num.div_rem(&den);
        if q < lower {
            dexp -= 1;
            continue;
        }
        if q >= upper {
            dexp += 1;
            continue;
        }
        let mut t = q;
        if away && !r.is_zero() {
            t += 1;
        }
        let mut e = dexp;
        if t == upper {
            t = lower.clone();
            e += 1;
        }
        let s = t.to_string();
        let (head, tail) = s.split_at(1);
        let sign = if neg { "-" } else { "" };
        return if tail.is_empty() {
            format!("{sign}{head}e{e}")
        } else {
            format!("{sign}{head}.{tail}e{e}")
        };
    }
}
