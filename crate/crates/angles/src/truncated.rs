use certified::{Dyadic, Interval, PrecisionConfig};
use exactlin::{IntVector, RationalSubspace};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::sines::{line_sine_sq_parts, principal_sines, psi_from_omegas, AngleEntry};
use crate::AngleError;

/// Exact truncations `Y_M = X/scale` of the target's generators, plus a bound on how far
/// each tail coordinate can still move.
#[derive(Clone, Debug)]
pub struct TruncatedTarget {
    pub n: usize,
    pub level: usize,
    pub generators: Vec<IntVector>,
    pub scales: Vec<BigInt>,
    /// Bound on `|Y_j − Y_{M,j}|` for every coordinate that has a tail.
    pub per_coordinate_tail: BigRational,
    /// How many coordinates of each generator have a tail.
    pub tail_coords: Vec<usize>,
}

impl TruncatedTarget {
    /// Each generator needs an entry of modulus at least its scale, so that `‖Y_M‖ ≥ 1`.
    pub fn new(
        n: usize,
        level: usize,
        generators: Vec<IntVector>,
        scales: Vec<BigInt>,
        per_coordinate_tail: BigRational,
        tail_coords: Vec<usize>,
    ) -> Result<Self, AngleError> {
        if generators.is_empty() {
            return Err(AngleError::Empty);
        }
        if scales.len() != generators.len() || tail_coords.len() != generators.len() {
            return Err(AngleError::Target("one scale and one tail count per generator".into()));
        }
        if generators.iter().any(|g| g.len() != n) {
            return Err(AngleError::DimensionMismatch);
        }
        if per_coordinate_tail.is_negative() {
            return Err(AngleError::Target("negative tail bound".into()));
        }
        for (i, (g, s)) in generators.iter().zip(&scales).enumerate() {
            if !s.is_positive() {
                return Err(AngleError::Target(format!("scale of generator {i} is not positive")));
            }
            if !g.iter().any(|x| &x.abs() >= s) {
                return Err(AngleError::Target(format!("generator {i} has no entry reaching its scale")));
            }
            if tail_coords[i] > n {
                return Err(AngleError::Target(format!("generator {i} has more tails than coordinates")));
            }
        }
        Ok(TruncatedTarget { n, level, generators, scales, per_coordinate_tail, tail_coords })
    }

    pub fn d(&self) -> usize {
        self.generators.len()
    }

    pub fn rational_generators(&self) -> Vec<Vec<BigRational>> {
        self.generators
            .iter()
            .zip(&self.scales)
            .map(|(g, s)| g.iter().map(|x| BigRational::new(x.clone(), s.clone())).collect())
            .collect()
    }
}

/// Interval for `ψ_j(A, B)` around the exactly computed `ψ_j(A_M, B)`.
#[derive(Clone, Debug)]
pub struct TruncatedAngle {
    pub psi: Interval,
    pub center: AngleEntry,
    pub delta: Interval,
    /// False when `d > 1`: the multi-generator constant is a convention, not a theorem.
    pub rigorous: bool,
}

/// `[ψ_j(A_M,B) − Δ, ψ_j(A_M,B) + Δ]` with `Δ = Σ_i ω(Y_i, Y_{M,i})`, each term bounded by
/// `‖Y_i − Y_{M,i}‖/‖Y_{M,i}‖ ≤ tail·√k_i`. For `d > 1` the sum is multiplied by `n`.
pub fn angle_interval_to_truncated_target(
    t: &TruncatedTarget,
    b: &RationalSubspace,
    j: usize,
    cfg: &PrecisionConfig,
) -> Result<TruncatedAngle, AngleError> {
    if b.n() != t.n {
        return Err(AngleError::DimensionMismatch);
    }
    let (d, e, n) = (t.d(), b.dim(), t.n);
    let g = (d + e).saturating_sub(n);
    if j == 0 || j + g > d.min(e) {
        return Err(AngleError::IndexOutOfRange);
    }
    let prec = cfg.working_bits;
    let center = if d == 1 {
        let (num, den) = line_sine_sq_parts(&t.generators[0], b)?;
        if num.is_zero() {
            AngleEntry::exact(BigRational::zero(), prec)?
        } else {
            let omega_sq = Interval::from_ratio(&num, &den, prec);
            AngleEntry { omega: omega_sq.sqrt()?, omega_sq, exact_sq: None }
        }
    } else {
        let basis: Vec<Vec<BigRational>> =
            b.basis().iter().map(|v| v.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect();
        let report = principal_sines(&t.rational_generators(), &basis, cfg)?;
        psi_from_omegas(&report, d, e, n)?.swap_remove(j - 1)
    };
    let tail = Interval::from_rational(&t.per_coordinate_tail, prec);
    let mut delta = Interval::zero(prec);
    for &k in &t.tail_coords {
        delta = delta.add(&tail.mul(&Interval::from_i64(k as i64, prec).sqrt()?));
    }
    if d > 1 {
        delta = delta.mul(&Interval::from_i64(n as i64, prec));
    }
    let dhi = Interval::point(delta.hi().clone(), prec);
    if center.omega.is_positive() && dhi.shl(2).compare(&Interval::point(center.omega.lo().clone(), prec)).is_none_or(|o| o.is_gt()) {
        let (c, _) = center.omega.to_decimal_pair(6);
        let (_, dh) = delta.to_decimal_pair(6);
        return Err(AngleError::InsufficientTruncation { level: t.level, delta: dh, center: c });
    }
    let lo = center.omega.sub(&dhi).lo().clone();
    let hi = center.omega.add(&dhi).hi().clone();
    let psi = Interval::new(lo, hi, prec).clamp_lower(&Dyadic::zero());
    Ok(TruncatedAngle { psi, center, delta, rigorous: d == 1 })
}
