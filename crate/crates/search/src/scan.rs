//! Best-approximation scans: a floating prefilter that only discards candidates whose
//! score is certainly below the floor, followed by exact or certified angles on the
//! survivors.

use angles::{angle_interval_to_truncated_target, line_sine_sq_parts, principal_sines, psi_from_omegas, TruncatedTarget};
use certified::{Interval, PrecisionConfig};
use exactlin::{ivec, orth_complement, RationalSubspace};
use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::enumerate::{dedup, enumerate_subspaces, pool, Strategy};
use crate::record::{sort_and_rank, ApproximationRecord};
use crate::SearchError;

/// What the candidates approximate.
#[derive(Clone, Debug)]
pub enum Target {
    Truncated(TruncatedTarget),
    Rational(RationalSubspace),
}

impl Target {
    pub fn n(&self) -> usize {
        match self {
            Target::Truncated(t) => t.n,
            Target::Rational(b) => b.n(),
        }
    }

    pub fn d(&self) -> usize {
        match self {
            Target::Truncated(t) => t.d(),
            Target::Rational(b) => b.dim(),
        }
    }

    fn float_rows(&self) -> Vec<Vec<f64>> {
        match self {
            Target::Truncated(t) => t
                .rational_generators()
                .iter()
                .map(|g| g.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect())
                .collect(),
            Target::Rational(b) => b.basis().iter().map(|v| float_vec(v)).collect(),
        }
    }
}

fn float_vec(v: &[BigInt]) -> Vec<f64> {
    v.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect()
}

#[derive(Clone, Debug)]
pub struct ScanConfig {
    pub n: usize,
    pub e: usize,
    pub j: usize,
    pub height_sq_max: u64,
    pub target: Target,
    /// `None` picks the default strategy for `(n, e)`.
    pub strategy: Option<Strategy>,
    /// Candidates for [`Strategy::ConstructedFamily`], tagged with their index `N`.
    pub family: Vec<(usize, RationalSubspace)>,
    pub workers: usize,
    pub seed: u64,
    /// Records whose score is certainly below this are dropped (height-1 records stay).
    pub score_floor: BigRational,
    pub precision: PrecisionConfig,
}

impl ScanConfig {
    pub fn new(n: usize, e: usize, j: usize, height_sq_max: u64, target: Target) -> Self {
        ScanConfig {
            n,
            e,
            j,
            height_sq_max,
            target,
            strategy: None,
            family: Vec::new(),
            workers: 1,
            seed: 0,
            score_floor: BigRational::one(),
            precision: PrecisionConfig::default(),
        }
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy.unwrap_or(Strategy::for_dims(self.n, self.e))
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ScanResult {
    pub records: Vec<ApproximationRecord>,
    pub strategy: Strategy,
    pub complete: bool,
    /// Candidates that reached the exact stage.
    pub examined: usize,
    pub flagged: usize,
}

/// Ascending squared sines of the principal angles between two row spans, in `f64`.
pub fn float_sines_sq(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<f64> {
    let (qa, qb) = (orthonormal(a), orthonormal(b));
    let (s, l) = if qa.len() <= qb.len() { (&qa, &qb) } else { (&qb, &qa) };
    let m: Vec<Vec<f64>> = s.iter().map(|x| l.iter().map(|y| dotf(x, y)).collect()).collect();
    let k = s.len();
    // I − M Mᵀ has the squared sines as eigenvalues
    let mut g: Vec<Vec<f64>> = (0..k)
        .map(|i| (0..k).map(|j| if i == j { 1.0 } else { 0.0 } - dotf(&m[i], &m[j])).collect())
        .collect();
    let mut ev = jacobi(&mut g);
    for x in ev.iter_mut() {
        *x = x.clamp(0.0, 1.0);
    }
    ev.sort_by(f64::total_cmp);
    ev
}

fn dotf(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn orthonormal(rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut q: Vec<Vec<f64>> = Vec::new();
    for r in rows {
        let mut v = r.clone();
        for _ in 0..2 {
            for u in &q {
                let c = dotf(&v, u);
                for (x, y) in v.iter_mut().zip(u) {
                    *x -= c * y;
                }
            }
        }
        let nv = dotf(&v, &v).sqrt();
        q.push(v.iter().map(|x| x / nv).collect());
    }
    q
}

fn jacobi(a: &mut [Vec<f64>]) -> Vec<f64> {
    let k = a.len();
    for _ in 0..100 {
        let off: f64 = (0..k).flat_map(|i| (0..k).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a[i][j] * a[i][j]).sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..k {
            for q in p + 1..k {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let th = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = th.signum() / (th.abs() + (th * th + 1.0).sqrt());
                let t = if th == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for r in 0..k {
                    let (x, y) = (a[r][p], a[r][q]);
                    a[r][p] = c * x - s * y;
                    a[r][q] = s * x + c * y;
                }
                for r in 0..k {
                    let (x, y) = (a[p][r], a[q][r]);
                    a[p][r] = c * x - s * y;
                    a[q][r] = s * x + c * y;
                }
            }
        }
    }
    (0..k).map(|i| a[i][i]).collect()
}

/// Largest admissible squared angle for a candidate of squared height `h ∈ [lo, hi]`:
/// `max h^{−floor}` over the range.
fn cut_sq(lo: f64, hi: f64, floor: f64) -> f64 {
    if floor >= 0.0 {
        lo.max(1.0).powf(-floor)
    } else {
        hi.powf(-floor)
    }
}

const REL_SLACK: f64 = 1e-6;

fn abs_slack(norm_sq: f64) -> f64 {
    1e-12 * (1.0 + norm_sq)
}

/// Candidate vectors for `e = 1` (`dual = false`) or normals of candidate hyperplanes
/// (`dual = true`) against a line target `y`, pruned on the last coordinate.
fn pruned_vectors(n: usize, bound: u64, y: &[f64], floor: f64, dual: bool, workers: usize) -> Result<Vec<Vec<i64>>, SearchError> {
    let bound = i64::try_from(bound).map_err(|_| SearchError::Bound("height bound exceeds i64".into()))?;
    let ny = dotf(y, y).sqrt();
    let y: Vec<f64> = y.iter().map(|x| x / ny).collect();
    let r = bound.sqrt();
    let yl = y[n - 1];
    let keep = |v: &[i64]| -> bool {
        let vf: Vec<f64> = v.iter().map(|&x| x as f64).collect();
        let nv = dotf(&vf, &vf);
        let s = dotf(&vf, &y);
        let cut = cut_sq(nv, nv, floor);
        // squared angle times ‖v‖²
        let lhs = if dual { s * s } else { nv - s * s };
        lhs <= nv * cut * (1.0 + REL_SLACK) + abs_slack(nv)
    };
    let last_range = |p: &[i64]| -> (i64, i64) {
        let pp: i64 = p.iter().map(|x| x * x).sum();
        let rem = (bound - pp).sqrt();
        let ppf = pp as f64;
        let s: f64 = p.iter().zip(&y).map(|(&a, b)| a as f64 * b).sum();
        // max of h·h^{−floor} over h ∈ [‖p‖², bound]
        let t = if floor >= 1.0 { ppf.max(1.0).powf(1.0 - floor) } else { (bound as f64).powf(1.0 - floor) };
        let t = t * (1.0 + REL_SLACK) + abs_slack(bound as f64);
        let (lo, hi) = if dual {
            if yl.abs() < 1e-12 {
                return (-rem, rem);
            }
            let tt = t.sqrt();
            let (a, b) = ((-tt - s) / yl, (tt - s) / yl);
            (a.min(b), a.max(b))
        } else {
            let qa = 1.0 - yl * yl;
            if qa < 1e-12 {
                return (-rem, rem);
            }
            let qb = -2.0 * s * yl;
            let qc = ppf - s * s - t;
            let disc = qb * qb - 4.0 * qa * qc;
            if disc < 0.0 {
                return (1, 0);
            }
            let sd = disc.sqrt();
            ((-qb - sd) / (2.0 * qa), (-qb + sd) / (2.0 * qa))
        };
        let lo = (lo.floor() as i64 - 1).max(-rem);
        let hi = (hi.ceil() as i64 + 1).min(rem);
        (lo, hi)
    };
    fn walk(
        prefix: &mut Vec<i64>,
        n: usize,
        rem: i64,
        nonzero: bool,
        range: &dyn Fn(&[i64]) -> (i64, i64),
        keep: &dyn Fn(&[i64]) -> bool,
        out: &mut Vec<Vec<i64>>,
    ) {
        if prefix.len() == n - 1 {
            let (lo, hi) = range(prefix);
            let lo = if nonzero { lo } else { lo.max(1) };
            for c in lo..=hi {
                if c * c > rem {
                    continue;
                }
                prefix.push(c);
                if prefix.iter().fold(0i64, |g, &x| g.gcd(&x)) == 1 && keep(prefix) {
                    out.push(prefix.clone());
                }
                prefix.pop();
            }
            return;
        }
        let r = rem.sqrt();
        for x in (if nonzero { -r } else { 0 })..=r {
            prefix.push(x);
            walk(prefix, n, rem - x * x, nonzero || x != 0, range, keep, out);
            prefix.pop();
        }
    }
    let parts: Vec<Vec<Vec<i64>>> = pool(workers)?.install(|| {
        (0..=r)
            .into_par_iter()
            .map(|a| {
                let mut out = Vec::new();
                if n == 1 {
                    return out;
                }
                let mut prefix = vec![a];
                if n == 2 {
                    let (lo, hi) = last_range(&prefix);
                    let lo = if a != 0 { lo } else { lo.max(1) };
                    for c in lo..=hi {
                        let v = vec![a, c];
                        if a * a + c * c <= bound && a.gcd(&c) == 1 && keep(&v) {
                            out.push(v);
                        }
                    }
                    return out;
                }
                walk(&mut prefix, n, bound - a * a, a != 0, &last_range, &keep, &mut out);
                out
            })
            .collect()
    });
    let mut vs: Vec<Vec<i64>> = parts.into_iter().flatten().collect();
    // the coordinate axes are always recorded
    for i in 0..n {
        vs.push((0..n).map(|k| i64::from(k == i)).collect());
    }
    Ok(vs)
}

/// `−ln ψ / ln H`, or `None` when `H = 1` or the `ψ` interval touches 0.
pub fn score_interval(psi: &Interval, height_sq: &BigInt, prec: u32) -> Option<Interval> {
    if height_sq <= &BigInt::one() || !psi.is_positive() {
        return None;
    }
    let ln_h = certified::ln_int(height_sq, prec).ok()?.shl(-1);
    let ln_psi = certified::ln(psi, prec).ok()?;
    ln_psi.neg().div(&ln_h).ok()
}

enum Exact {
    Zero,
    Psi(Interval, Option<String>),
    Failed(String),
}

fn exact_psi(target: &Target, b: &RationalSubspace, j: usize, cfg: &PrecisionConfig) -> Exact {
    let prec = cfg.working_bits;
    match target {
        Target::Truncated(t) => match angle_interval_to_truncated_target(t, b, j, cfg) {
            Ok(a) => Exact::Psi(a.psi, (!a.rigorous).then(|| "non-rigorous multi-generator perturbation".to_string())),
            Err(e) => Exact::Failed(e.to_string()),
        },
        Target::Rational(a) if a.dim() == 1 => match line_sine_sq_parts(&a.basis()[0], b) {
            Ok((num, _)) if num.is_zero() => Exact::Zero,
            Ok((num, den)) => match Interval::from_ratio(&num, &den, prec).sqrt() {
                Ok(p) => Exact::Psi(p, None),
                Err(e) => Exact::Failed(e.to_string()),
            },
            Err(e) => Exact::Failed(e.to_string()),
        },
        Target::Rational(a) => {
            let rat = |s: &RationalSubspace| -> Vec<Vec<BigRational>> {
                s.basis().iter().map(|v| v.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect()
            };
            let res = principal_sines(&rat(a), &rat(b), cfg).and_then(|r| psi_from_omegas(&r, a.dim(), b.dim(), a.n()));
            match res {
                Ok(psis) => match psis.get(j - 1) {
                    Some(p) if p.exact_sq.as_ref().is_some_and(|x| x.is_zero()) => Exact::Zero,
                    Some(p) => Exact::Psi(p.omega.clone(), None),
                    None => Exact::Failed("angle index out of range".into()),
                },
                Err(e) => Exact::Failed(e.to_string()),
            }
        }
    }
}

/// Evaluates one candidate. `None` means `ψ = 0` exactly.
pub fn evaluate(target: &Target, b: RationalSubspace, j: usize, cfg: &PrecisionConfig, tag: usize) -> Option<ApproximationRecord> {
    let prec = cfg.working_bits;
    let height_sq = b.height_sq().clone();
    match exact_psi(target, &b, j, cfg) {
        Exact::Zero => None,
        Exact::Psi(psi, flag) => {
            let score = score_interval(&psi, &height_sq, prec);
            Some(ApproximationRecord { n_or_rank: tag, subspace: b, height_sq, psi: Some(psi), score, on_frontier: false, flag })
        }
        Exact::Failed(msg) => {
            Some(ApproximationRecord { n_or_rank: tag, subspace: b, height_sq, psi: None, score: None, on_frontier: false, flag: Some(msg) })
        }
    }
}

fn validate(cfg: &ScanConfig) -> Result<(), SearchError> {
    let (n, e, d) = (cfg.n, cfg.e, cfg.target.d());
    if cfg.target.n() != n {
        return Err(SearchError::Dimension(format!("target lives in dimension {}, scan in {n}", cfg.target.n())));
    }
    if n < 2 || e == 0 || e >= n {
        return Err(SearchError::Dimension(format!("need 1 ≤ e ≤ n−1, got n = {n}, e = {e}")));
    }
    let g = (d + e).saturating_sub(n);
    if cfg.j == 0 || cfg.j + g > d.min(e) {
        return Err(SearchError::Dimension(format!("angle index {} out of range for d = {d}, e = {e}", cfg.j)));
    }
    Ok(())
}

/// Exhaustive (or, where completeness is not guaranteed, sampled) scan for best
/// approximations of the target by `e`-dimensional rational subspaces.
pub fn best_approx_scan(cfg: &ScanConfig) -> Result<ScanResult, SearchError> {
    validate(cfg)?;
    let (n, e) = (cfg.n, cfg.e);
    let strategy = cfg.strategy();
    let floor = cfg.score_floor.to_f64().unwrap_or(0.0);
    let family = strategy == Strategy::ConstructedFamily;
    let (candidates, complete): (Vec<(usize, RationalSubspace)>, bool) = if family {
        if cfg.family.iter().any(|(_, b)| b.n() != n || b.dim() != e) {
            return Err(SearchError::Dimension("family member of the wrong shape".into()));
        }
        (cfg.family.clone(), true)
    } else if cfg.target.d() == 1 && cfg.j == 1 && matches!((strategy, e == 1, e + 1 == n), (Strategy::PrimitiveVectors, true, _) | (Strategy::Dual, _, true)) {
        let y = &cfg.target.float_rows()[0];
        let dual = strategy == Strategy::Dual;
        let vs = pruned_vectors(n, cfg.height_sq_max, y, floor, dual, cfg.workers)?;
        let bs = vs
            .iter()
            .map(|v| {
                let l = RationalSubspace::from_basis_claim(n, vec![ivec(v)])?;
                if dual {
                    orth_complement(&l)
                } else {
                    Ok(l)
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        (dedup(bs).into_iter().map(|b| (0, b)).collect(), true)
    } else {
        let en = enumerate_subspaces(n, e, cfg.height_sq_max, Some(strategy), cfg.workers, cfg.seed)?;
        let a = cfg.target.float_rows();
        let g = (cfg.target.d() + e).saturating_sub(n);
        let kept = pool(cfg.workers)?.install(|| {
            en.subspaces
                .into_par_iter()
                .filter(|b| {
                    let h = b.height_sq().to_f64().unwrap_or(f64::INFINITY);
                    if h <= 1.0 {
                        return true;
                    }
                    let s = float_sines_sq(&a, &b.basis().iter().map(|v| float_vec(v)).collect::<Vec<_>>());
                    let psi_sq = s.get(cfg.j - 1 + g).copied().unwrap_or(1.0);
                    psi_sq <= cut_sq(h, h, floor) * (1.0 + REL_SLACK) + 1e-9
                })
                .map(|b| (0, b))
                .collect::<Vec<_>>()
        });
        (kept, en.complete)
    };
    let examined = candidates.len();
    let mut records: Vec<ApproximationRecord> = pool(cfg.workers)?.install(|| {
        candidates
            .into_par_iter()
            .filter_map(|(tag, b)| evaluate(&cfg.target, b, cfg.j, &cfg.precision, tag))
            .filter(|r| family || keep_record(r, &cfg.score_floor))
            .collect()
    });
    mark_frontier(&mut records);
    sort_and_rank(&mut records, !family);
    let flagged = records.iter().filter(|r| r.flag.is_some()).count();
    Ok(ScanResult { records, strategy, complete, examined, flagged })
}

fn keep_record(r: &ApproximationRecord, floor: &BigRational) -> bool {
    if r.height_sq.is_one() || r.psi.is_none() {
        return true;
    }
    match &r.score {
        None => true,
        Some(s) => s.compare_rational(floor) != Some(std::cmp::Ordering::Less),
    }
}

/// Flags every record not certainly dominated: no other record has `H' ≤ H` with a
/// certainly smaller `ψ`, or `H' < H` with a `ψ` certainly no larger.
pub fn mark_frontier(records: &mut [ApproximationRecord]) {
    let mut order: Vec<usize> = (0..records.len()).filter(|&i| records[i].psi.is_some()).collect();
    order.sort_by(|&a, &b| {
        let (x, y) = (&records[a], &records[b]);
        x.height_sq.cmp(&y.height_sq).then_with(|| x.subspace.plucker().cmp(y.subspace.plucker()))
    });
    let mut best_lower: Option<certified::Dyadic> = None;
    let mut i = 0;
    while i < order.len() {
        let h = records[order[i]].height_sq.clone();
        let group: Vec<usize> = order[i..].iter().copied().take_while(|&k| records[k].height_sq == h).collect();
        let his: Vec<certified::Dyadic> = group.iter().map(|&k| records[k].psi.as_ref().expect("filtered").hi().clone()).collect();
        for &k in &group {
            let lo = records[k].psi.as_ref().expect("filtered").lo().clone();
            let lower = best_lower.as_ref().is_some_and(|b| b <= &lo);
            let same = his.iter().any(|x| x < &lo);
            records[k].on_frontier = !lower && !same;
        }
        let gmin = his.into_iter().min().expect("nonempty group");
        best_lower = Some(match best_lower {
            Some(b) if b <= gmin => b,
            _ => gmin,
        });
        i += group.len();
    }
}
