use certified::{Dyadic, Interval};
use exactlin::RationalSubspace;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::record::ApproximationRecord;
use crate::SearchError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum EstimateMode {
    FrontierMax,
    FamilySlope,
}

/// Least-squares slope of `ys` against `xs` with interval propagation.
pub fn least_squares_slope(xs: &[Interval], ys: &[Interval], prec: u32) -> Result<Interval, SearchError> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(SearchError::TooFewRecords(xs.len()));
    }
    let k = Interval::from_i64(xs.len() as i64, prec);
    let mean = |v: &[Interval]| -> Result<Interval, SearchError> {
        Ok(v.iter().fold(Interval::zero(prec), |a, x| a.add(x)).div(&k)?)
    };
    let (mx, my) = (mean(xs)?, mean(ys)?);
    let mut sxx = Interval::zero(prec);
    let mut sxy = Interval::zero(prec);
    for (x, y) in xs.iter().zip(ys) {
        let dx = x.sub(&mx);
        sxx = sxx.add(&dx.mul(&dx));
        sxy = sxy.add(&dx.mul(&y.sub(&my)));
    }
    if !sxx.is_positive() {
        return Err(SearchError::Degenerate("all heights equal".into()));
    }
    Ok(sxy.div(&sxx)?)
}

/// `frontierMax`: the largest score interval. `familySlope`: the slope of
/// `(ln H, −ln ψ)` over the records, which should form one constructed family.
pub fn exponent_estimate(records: &[ApproximationRecord], mode: EstimateMode, prec: u32) -> Result<Interval, SearchError> {
    if records.len() < 2 {
        return Err(SearchError::TooFewRecords(records.len()));
    }
    match mode {
        EstimateMode::FrontierMax => {
            let scored: Vec<&Interval> = records.iter().filter_map(|r| r.score.as_ref()).collect();
            let lo = scored.iter().map(|s| s.lo().clone()).max();
            let hi = scored.iter().map(|s| s.hi().clone()).max();
            match (lo, hi) {
                (Some(lo), Some(hi)) => Ok(Interval::new(lo, hi, prec)),
                _ => Err(SearchError::Degenerate("no record has a finite score".into())),
            }
        }
        EstimateMode::FamilySlope => {
            if records.iter().all(|r| r.height_sq == records[0].height_sq) {
                return Err(SearchError::Degenerate("all heights equal".into()));
            }
            let mut xs = Vec::new();
            let mut ys = Vec::new();
            for r in records {
                let psi = r.psi.as_ref().filter(|p| p.is_positive()).ok_or_else(|| {
                    SearchError::Degenerate(format!("record of height² {} has no positive angle", r.height_sq))
                })?;
                xs.push(certified::ln_int(&r.height_sq, prec)?.shl(-1));
                ys.push(certified::ln(psi, prec)?.neg());
            }
            least_squares_slope(&xs, &ys, prec)
        }
    }
}

/// Records with `ψ ≤ H^{−μ}` that are not family members, and the threshold they set.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ThresholdReport {
    pub mu: String,
    /// Indices of records that satisfy (or cannot be shown to violate) `ψ ≤ H^{−μ}`.
    pub qualifying: Vec<usize>,
    /// Qualifying records outside the family.
    pub offenders: Vec<usize>,
    /// Largest squared height of an offender, 0 when there is none. Every qualifying
    /// record strictly above it is a family member.
    #[serde(serialize_with = "ser_big")]
    pub h0_sq: BigInt,
}

fn ser_big<S: serde::Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// Whether `ψ ≤ H^{−μ}` is possible for the record (conservative: only a certain
/// violation returns false).
pub fn may_satisfy(r: &ApproximationRecord, mu: &BigRational, prec: u32) -> Result<bool, SearchError> {
    let Some(psi) = &r.psi else { return Ok(true) };
    if !psi.is_positive() {
        return Ok(true);
    }
    let v = certified::ln(psi, prec)?.add(&certified::ln_int(&r.height_sq, prec)?.shl(-1).mul(&Interval::from_rational(mu, prec)));
    Ok(v.lo() <= &Dyadic::zero())
}

pub fn threshold_report(
    records: &[ApproximationRecord],
    family: &[RationalSubspace],
    mu: &BigRational,
    prec: u32,
) -> Result<ThresholdReport, SearchError> {
    let mut qualifying = Vec::new();
    let mut offenders = Vec::new();
    let mut h0_sq = BigInt::zero();
    for (i, r) in records.iter().enumerate() {
        if !may_satisfy(r, mu, prec)? {
            continue;
        }
        qualifying.push(i);
        if !family.iter().any(|b| b == &r.subspace) {
            offenders.push(i);
            if r.height_sq > h0_sq {
                h0_sq = r.height_sq.clone();
            }
        }
    }
    Ok(ThresholdReport { mu: mu.to_string(), qualifying, offenders, h0_sq })
}
