use certified::{ln2, ln_int, ln_ratio, Dyadic, Interval, PrecisionConfig};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow};
use proptest::prelude::*;

fn rat(s: &str) -> BigRational {
    s.parse().unwrap()
}

// ln 2 and ln 10 to 40 digits, from published tables.
const LN2_40: &str = "0.6931471805599453094172321214581765680755";
const LN10_40: &str = "2.3025850929940456840179914546843642076011";

fn decimal_rational(s: &str) -> BigRational {
    let (int, frac) = s.split_once('.').unwrap();
    let den = BigInt::from(10).pow(frac.len() as u32);
    let num: BigInt = format!("{int}{frac}").parse().unwrap();
    BigRational::new(num, den)
}

fn within_table(iv: &Interval, table: &str) {
    let t = decimal_rational(table);
    let slack = BigRational::new(BigInt::one(), BigInt::from(10).pow(39u32));
    assert!(iv.compare_rational(&(&t - &slack)) == Some(std::cmp::Ordering::Greater), "{iv}");
    assert!(iv.compare_rational(&(&t + &slack)) == Some(std::cmp::Ordering::Less), "{iv}");
}

#[test]
fn ln2_matches_table() {
    let iv = ln2(200);
    within_table(&iv, LN2_40);
    assert!(iv.rel_width_within(190));
}

#[test]
fn ln10_matches_table() {
    let iv = ln_int(&BigInt::from(10), 200).unwrap();
    within_table(&iv, LN10_40);
}

#[test]
fn ln_of_huge_power_scales() {
    // ln(5^50000) = 50000 ln 5
    let n = BigInt::from(5).pow(50000u32);
    let a = ln_int(&n, 128).unwrap();
    let b = ln_int(&BigInt::from(5), 160).unwrap().mul(&Interval::from_i64(50000, 160));
    assert!(a.compare(&b).is_none(), "{a} vs {b}");
    assert!(a.rel_width_within(100));
}

#[test]
fn ln_ratio_of_equal_parts_contains_zero() {
    let n = BigInt::from(7).pow(300u32);
    let r = ln_ratio(&n, &n, 128).unwrap();
    assert!(r.contains_zero());
}

#[test]
fn sqrt_two_squares_back() {
    let two = Interval::from_i64(2, 128);
    let s = two.sqrt().unwrap();
    assert!(s.mul(&s).contains_rational(&rat("2")));
    assert!(s.compare_rational(&rat("1414213562/1000000000")) == Some(std::cmp::Ordering::Greater));
    assert!(s.compare_rational(&rat("1414213563/1000000000")) == Some(std::cmp::Ordering::Less));
}

#[test]
fn decimal_rendering_is_outward() {
    let third = Interval::from_ratio(&BigInt::from(1), &BigInt::from(3), 128);
    let (lo, hi) = third.to_decimal_pair(6);
    assert_eq!(lo, "3.33333e-1");
    assert_eq!(hi, "3.33334e-1");
    let neg = third.neg();
    let (lo, hi) = neg.to_decimal_pair(6);
    assert_eq!(lo, "-3.33334e-1");
    assert_eq!(hi, "-3.33333e-1");
    let tiny = Interval::point(Dyadic::new(BigInt::one(), -2000), 64);
    let (lo, _) = tiny.to_decimal_pair(4);
    assert!(lo.ends_with("e-603"), "{lo}");
}

#[test]
fn refine_doubles_until_decided() {
    let cfg = PrecisionConfig::new(64, 3).unwrap();
    let mut seen = Vec::new();
    let r = cfg.refine(|bits| {
        seen.push(bits);
        (bits >= 256).then_some(bits)
    });
    assert_eq!(r.unwrap(), 256);
    assert_eq!(seen, vec![64, 128, 256]);
    let fail = cfg.refine(|_| None::<()>);
    assert!(fail.is_err());
    assert!(PrecisionConfig::new(32, 1).is_err());
}

proptest! {
    #[test]
    fn ratio_enclosure(p in -10_000i64..10_000, q in 1i64..10_000) {
        let iv = Interval::from_ratio(&BigInt::from(p), &BigInt::from(q), 70);
        prop_assert!(iv.contains_rational(&BigRational::new(p.into(), q.into())));
    }

    #[test]
    fn ln_is_additive(a in 1u64..1_000_000, b in 1u64..1_000_000) {
        let la = ln_int(&BigInt::from(a), 96).unwrap();
        let lb = ln_int(&BigInt::from(b), 96).unwrap();
        let lab = ln_int(&(BigInt::from(a) * BigInt::from(b)), 96).unwrap();
        prop_assert!(la.add(&lb).compare(&lab).is_none());
    }

    #[test]
    fn mul_and_recip_enclose(p in 1i64..5000, q in 1i64..5000, r in -5000i64..5000, s in 1i64..5000) {
        let x = BigRational::new(p.into(), q.into());
        let y = BigRational::new(r.into(), s.into());
        let ix = Interval::from_rational(&x, 80);
        let iy = Interval::from_rational(&y, 80);
        prop_assert!(ix.mul(&iy).contains_rational(&(&x * &y)));
        prop_assert!(iy.div(&ix).unwrap().contains_rational(&(&y / &x)));
        prop_assert!(ix.sub(&iy).contains_rational(&(&x - &y)));
    }
}
