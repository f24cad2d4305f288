use std::cmp::Ordering;

use certified::{ln_rational, PrecisionConfig};
use exactlin::{c_constant, Surd5};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::formulas::{extend_row, increasing_tuples};
use crate::value::{f_func, kmax, kmax_argmax, rat, v_q};
use crate::ExpError;

/// Exact powers are used while every exponent stays below this.
const EXACT_EXPONENT_LIMIT: u64 = 1 << 14;

fn pow_rat(x: &BigRational, k: u64) -> BigRational {
    let k = k as usize;
    BigRational::new_raw(num_traits::pow(x.numer().clone(), k), num_traits::pow(x.denom().clone(), k))
}

/// Compares `a^x` with `b^y` for positive `a, b` and nonnegative rational `x, y`.
pub fn cmp_powers(
    a: &BigRational,
    x: &BigRational,
    b: &BigRational,
    y: &BigRational,
    prec: &PrecisionConfig,
) -> Result<Ordering, ExpError> {
    if !a.is_positive() || !b.is_positive() || x.is_negative() || y.is_negative() {
        return Err(ExpError::Domain("powers need positive bases and nonnegative exponents".into()));
    }
    // a^x vs b^y  ⇔  a^(xn·yd) vs b^(yn·xd)
    let ea = (x.numer() * y.denom()).to_u64();
    let eb = (y.numer() * x.denom()).to_u64();
    if let (Some(ea), Some(eb)) = (ea, eb) {
        if ea <= EXACT_EXPONENT_LIMIT && eb <= EXACT_EXPONENT_LIMIT {
            let (pa, pb) = (pow_rat(a, ea), pow_rat(b, eb));
            // cross-multiplied to stay with unreduced numerators
            return Ok((pa.numer() * pb.denom()).cmp(&(pb.numer() * pa.denom())));
        }
    }
    prec.refine(|bits| {
        let la = ln_rational(a, bits).ok()?;
        let lb = ln_rational(b, bits).ok()?;
        let lhs = la.mul(&certified::Interval::from_rational(x, bits));
        let rhs = lb.mul(&certified::Interval::from_rational(y, bits));
        match lhs.compare(&rhs) {
            Some(Ordering::Equal) | None => None,
            o => o,
        }
    })
    .map_err(|e| ExpError::Ambiguous(format!("{a}^({x}) vs {b}^({y}): {e}")))
}

/// Compares `a^{c₁}` with `b^y` where `c₁ = (1 + 1/m)^{1/d}` and `a > 1`.
pub fn cmp_c1_power(a: &BigRational, b: &BigRational, y: &BigRational, d: usize, m: usize, prec: &PrecisionConfig) -> Result<Ordering, ExpError> {
    if a <= &BigRational::one() {
        return Err(ExpError::Domain(format!("base {a} must exceed 1")));
    }
    let ratio = BigRational::new(BigInt::from(m + 1), BigInt::from(m));
    if d == 1 {
        return cmp_powers(a, &ratio, b, y, prec);
    }
    if b <= &BigRational::one() || y.is_zero() {
        return Ok(Ordering::Greater);
    }
    // a^{c₁} > b^y  ⇔  (y·ln b / ln a)^d < (m+1)/m
    prec.refine(|bits| {
        let la = ln_rational(a, bits).ok()?;
        let lb = ln_rational(b, bits).ok()?;
        let r = lb.mul(&certified::Interval::from_rational(y, bits)).div(&la).ok()?;
        match r.pow_u(d as u32).compare_rational(&ratio) {
            Some(Ordering::Less) => Some(Ordering::Greater),
            Some(Ordering::Greater) => Some(Ordering::Less),
            _ => None,
        }
    })
    .map_err(|e| ExpError::Ambiguous(format!("{a}^c1 vs {b}^({y}): {e}")))
}

#[derive(Clone, Debug, Serialize)]
pub struct HypothesisCheck {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct HypothesisReport {
    pub checks: Vec<HypothesisCheck>,
    /// Every stated growth condition on the rows, strict and extended.
    pub stated_hypotheses_hold: bool,
    /// The window inequality checked directly over all `k`, `e`, `J`, `q`.
    pub window_inequality_holds: bool,
    pub window_inequality_failure: Option<String>,
    /// `K_{i+1,v} ≥ K_{i,v}` for every row pair and `v ≤ m`.
    pub row_dominance_holds: bool,
}

/// Growth conditions on `d` rows of `m` (or `m + 1`) ratios for the block construction.
pub fn validate_beta_hypotheses(
    d: usize,
    m: usize,
    beta: &[Vec<BigRational>],
    c2: &BigRational,
    prec: &PrecisionConfig,
) -> Result<HypothesisReport, ExpError> {
    if d == 0 || m == 0 || beta.len() != d {
        return Err(ExpError::Domain(format!("need d ≥ 1 rows for m ≥ 1, got {} rows", beta.len())));
    }
    let ratio = BigRational::new(BigInt::from(m + 1), BigInt::from(m));
    if c2 <= &BigRational::one() || pow_rat(c2, d as u64) >= ratio {
        return Err(ExpError::Domain(format!("c2 = {c2} not in (1, (1+1/{m})^(1/{d}))")));
    }
    let ext: Vec<Vec<BigRational>> = beta.iter().map(|r| extend_row(r, m)).collect::<Result<_, _>>()?;
    if ext.iter().flatten().any(|b| b <= &BigRational::one()) {
        return Err(ExpError::Domain("row entries must exceed 1".into()));
    }
    let first = |i: usize| &ext[i][..m];
    let mn = |r: &[BigRational]| r.iter().min().unwrap().clone();
    let mx = |r: &[BigRational]| r.iter().max().unwrap().clone();
    let one = BigRational::one();
    let three_d = rat(3 * d as i64);
    let thresh_exp = c2 / (c2 - &one);

    let mut checks = Vec::new();
    let mut push = |name: String, holds: bool, detail: String| checks.push(HypothesisCheck { name, holds, detail });
    let strict = |o: Ordering| o == Ordering::Greater;
    let loose = |o: Ordering| o != Ordering::Less;

    for width in [m, m + 1] {
        let extended = width > m;
        let tag = if extended { "extended " } else { "" };
        let ok = |o: Ordering| if extended { loose(o) } else { strict(o) };
        let rows = |i: usize| &ext[i][..width];
        let rel = if extended { ">=" } else { ">" };
        let (lo1, hi1) = (mn(rows(0)), mx(rows(0)));
        let o = cmp_powers(&lo1, &one, &three_d, &thresh_exp, prec)?;
        push(format!("{tag}row 1 floor"), ok(o), format!("min row1 = {lo1} {rel} (3d)^({thresh_exp})"));
        let o = cmp_c1_power(&lo1, &hi1, c2, d, m, prec)?;
        push(format!("{tag}row 1 spread"), ok(o), format!("(min row1)^c1 {rel} (max row1)^c2, min {lo1}, max {hi1}"));
        for i in 0..d - 1 {
            let (lo, hi_next) = (mn(rows(i)), mx(rows(i + 1)));
            let o = cmp_c1_power(&lo, &hi_next, &one, d, m, prec)?;
            push(format!("{tag}row {} below row {}^c1", i + 2, i + 1), ok(o), format!("{lo}^c1 {rel} {hi_next}"));
            let (lo_next, hi) = (mn(rows(i + 1)), mx(rows(i)));
            let o = cmp_powers(&lo_next, &one, &hi, c2, prec)?;
            push(format!("{tag}row {} above row {}^c2", i + 2, i + 1), ok(o), format!("{lo_next} {rel} {hi}^({c2})"));
        }
    }
    for (i, r) in ext.iter().enumerate() {
        let holds = r[m] <= mn(first(i));
        push(format!("row {} extension is the row minimum", i + 1), holds, format!("beta_(m+1) = {}", r[m]));
    }
    let stated = checks.iter().all(|c| c.holds);

    let failure = window_inequality(d, m, &ext)?;
    let dominance = (0..d.saturating_sub(1)).all(|i| (1..=m).all(|v| kmax(first(i + 1), v).unwrap() >= kmax(first(i), v).unwrap()));
    Ok(HypothesisReport {
        checks,
        stated_hypotheses_hold: stated,
        window_inequality_holds: failure.is_none(),
        window_inequality_failure: failure,
        row_dominance_holds: dominance,
    })
}

/// `(1 − 1/min β_{j_q})(1/Σ_{ℓ>f} 1/K_{j_ℓ,v_ℓ} − 1) − K_{j_q,v_q−1} ≥ 0` with `K` over
/// the `m + 1` extended entries, for every `k ≤ d`, `k ≤ e < k(m+1)`, `j₁ < … < j_k`, `q`.
/// Returns the first failing case.
fn window_inequality(d: usize, m: usize, ext: &[Vec<BigRational>]) -> Result<Option<String>, ExpError> {
    let kx = |i: usize, v: usize| kmax(&ext[i - 1][..m + 1], v);
    let one = BigRational::one();
    for k in 1..=d {
        for e in k..k * (m + 1) {
            let f = f_func(e, m * k);
            let vs = v_q(e, k)?;
            for j in increasing_tuples(d, k) {
                let mut s = BigRational::zero();
                for l in f..k {
                    s += kx(j[l], vs[l])?.recip();
                }
                let mu = s.recip();
                for q in 0..k {
                    let lo = ext[j[q] - 1][..m + 1].iter().min().unwrap();
                    let lhs = (&one - lo.recip()) * (&mu - &one) - kx(j[q], vs[q] - 1)?;
                    if lhs.is_negative() {
                        return Ok(Some(format!("k={k} e={e} J={j:?} q={}: {lhs} < 0", q + 1)));
                    }
                }
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OThreshold {
    /// The constant `C_d` in `Q(√5)`.
    Exact,
    Relaxed(BigRational),
}

#[derive(Clone, Debug, Serialize)]
pub struct GammaFromBeta {
    #[serde(serialize_with = "ser_rats")]
    pub gamma: Vec<BigRational>,
    pub in_open_set: bool,
    pub violations: Vec<String>,
}

fn ser_rats<S: serde::Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|r| r.to_string()))
}

/// `γ_j = β_j/β_{j−1}` (`β₀ = 1`) and membership of `β` in the open set
/// `β₁ > C`, `Cβ_i < β_{i+1} < min_{1≤j≤i} β_{i+1−j}β_j`.
pub fn gamma_from_beta(beta: &[BigRational], d: usize, n: usize, threshold: &OThreshold) -> Result<GammaFromBeta, ExpError> {
    if d == 0 || n <= d || beta.len() != n - d {
        return Err(ExpError::Domain(format!("expected n−d = {} targets, got {}", n.saturating_sub(d), beta.len())));
    }
    if beta.iter().any(|b| !b.is_positive()) {
        return Err(ExpError::Domain("targets must be positive".into()));
    }
    let mut gamma = Vec::with_capacity(beta.len());
    let mut prev = BigRational::one();
    for b in beta {
        gamma.push(b / &prev);
        prev = b.clone();
    }
    let c = match threshold {
        OThreshold::Exact => c_constant(d, n),
        OThreshold::Relaxed(r) => Surd5::rational(r.clone()),
    };
    let mut violations = Vec::new();
    if Surd5::rational(beta[0].clone()) <= c {
        violations.push(format!("beta_1 = {} not above {}", beta[0], c));
    }
    for i in 1..beta.len() {
        // 0-based: beta[i] plays β_{i+1}
        if Surd5::rational(beta[i].clone()) <= c.scale(&beta[i - 1]) {
            violations.push(format!("beta_{} = {} not above C*beta_{}", i + 1, beta[i], i));
        }
        let cap = (1..=i).map(|j| &beta[i - j] * &beta[j - 1]).min().unwrap();
        if beta[i] >= cap {
            violations.push(format!("beta_{} = {} not below {}", i + 1, beta[i], cap));
        }
    }
    Ok(GammaFromBeta { gamma, in_open_set: violations.is_empty(), violations })
}

/// Synchronized indices `N_1 … N_k` for the rows `J` (1-based, increasing) of a block
/// construction: `N_q = 0` for `q ≤ f`, `N_{f+1}` given, and for later `q`
/// `N_q = 2m⌊log(E_{f+1}^{N_{f+1}/2m} α_{f+1,v_{f+1}−1}) / log E_q⌋ + L_q`.
/// The floor is decided exactly by integer power comparison.
pub fn witness_ns(beta: &[Vec<BigRational>], m: usize, j: &[usize], e: usize, n_f1: u64) -> Result<Vec<u64>, ExpError> {
    let k = j.len();
    if k == 0 || j.windows(2).any(|w| w[0] >= w[1]) || j.iter().any(|&x| x == 0 || x > beta.len()) {
        return Err(ExpError::Domain(format!("J = {j:?} must be increasing within 1..={}", beta.len())));
    }
    if e < k || e >= k * (m + 1) {
        return Err(ExpError::Domain(format!("need k ≤ e < k(m+1), got e={e}, k={k}")));
    }
    if n_f1 == 0 || n_f1 % (2 * m as u64) != 0 {
        return Err(ExpError::Domain(format!("N_(f+1) = {n_f1} must be a positive multiple of 2m = {}", 2 * m)));
    }
    let f = f_func(e, m * k);
    let vs = v_q(e, k)?;
    let rows: Vec<Vec<BigRational>> = j.iter().map(|&i| extend_row(&beta[i - 1], m)).collect::<Result<_, _>>()?;
    if rows.iter().flatten().any(|b| b <= &BigRational::one()) {
        return Err(ExpError::Domain("row entries must exceed 1".into()));
    }
    let period = |r: &[BigRational]| r.iter().cloned().product::<BigRational>();
    let alpha = |r: &[BigRational], len: usize| (0..len).map(|s| r[s % r.len()].clone()).product::<BigRational>();

    let mut out = vec![0u64; k];
    out[f] = n_f1;
    let base = &rows[f];
    let reps = n_f1 / (2 * m as u64);
    if reps > 1 << 16 {
        return Err(ExpError::Domain(format!("N_(f+1) = {n_f1} too large for exact evaluation")));
    }
    let target = pow_rat(&period(base), reps) * alpha(base, vs[f] - 1);
    for q in f + 1..k {
        let eq = period(&rows[q]);
        let t = floor_log(&target, &eq)?;
        let (_, l) = kmax_argmax(&rows[q], vs[q], m)?;
        out[q] = 2 * m as u64 * t + l as u64;
    }
    Ok(out)
}

/// Largest `t ≥ 0` with `base^t ≤ x`, for `x ≥ 1` and `base > 1`.
fn floor_log(x: &BigRational, base: &BigRational) -> Result<u64, ExpError> {
    let guess = {
        let lx = ln_rational(x, 128).map_err(|e| ExpError::Domain(e.to_string()))?.mid_f64_lossy();
        let lb = ln_rational(base, 128).map_err(|e| ExpError::Domain(e.to_string()))?.mid_f64_lossy();
        (lx / lb).floor().max(0.0) as u64
    };
    let mut t = guess;
    while t > 0 && &pow_rat(base, t) > x {
        t -= 1;
    }
    while &pow_rat(base, t + 1) <= x {
        t += 1;
    }
    Ok(t)
}
