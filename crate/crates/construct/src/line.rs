use angles::TruncatedTarget;
use exactlin::{IntVector, RationalSubspace, Surd5};
use exponents::mu_line_formula;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use serde::Serialize;

use crate::{ConstructError, DigitFamily, GrowthSchedule, Mode};

/// `Y = (1, 0^{offset}, σ_0, …, σ_{L−1})` with `L = n − 1 − offset` lanes, and its
/// truncations `X_N = θ^{⌊α_N⌋}(1, 0^{offset}, σ_{0,N}, …, σ_{L−1,N})`.
#[derive(Clone, Debug)]
pub struct LineConstruction {
    n: usize,
    offset: usize,
    schedule: GrowthSchedule,
    digits: DigitFamily,
    mode: Mode,
}

/// Everything needed to rebuild a line bit for bit.
#[derive(Clone, Debug, Serialize)]
pub struct LineTranscript {
    pub n: usize,
    pub offset: usize,
    pub theta: String,
    pub gamma: Vec<String>,
    pub mode: Mode,
    pub seed: Option<u64>,
    pub floors: Vec<String>,
    pub digits: Vec<u8>,
}

/// One period followed by `gamma.len()` copies of `c`.
pub(crate) fn completed_period(gamma: &[Surd5], c: &Surd5) -> Vec<Surd5> {
    let mut out = gamma.to_vec();
    out.extend(std::iter::repeat(c.clone()).take(gamma.len()));
    out
}

impl LineConstruction {
    /// No threshold checks: any schedule with strictly increasing floors works.
    pub fn from_parts(n: usize, offset: usize, schedule: GrowthSchedule, digits: DigitFamily) -> Result<Self, ConstructError> {
        if n < 2 || offset + 2 > n {
            return Err(ConstructError::Dimension(format!("n={n}, offset={offset}")));
        }
        if digits.lane_count() != n - 1 - offset {
            return Err(ConstructError::Dimension(format!(
                "{} digit lanes for {} free coordinates",
                digits.lane_count(),
                n - 1 - offset
            )));
        }
        Ok(LineConstruction { n, offset, schedule, digits, mode: Mode::Relaxed })
    }

    /// Line in `R^n` with periodic ratios `gamma`. Strict mode needs every ratio
    /// `≥ 2 + (√5−1)/2`; relaxed mode needs `> 2`.
    pub fn build(n: usize, gamma: Vec<Surd5>, theta: BigInt, seed: u64, mode: Mode) -> Result<Self, ConstructError> {
        Self::build_offset(n, 0, gamma, theta, seed, mode, &Surd5::golden_square())
    }

    /// The line of the theorem for `d = 1`: `γ_1 … γ_{n−1}` completed by `n − 1` copies of
    /// `C_1` (exact) into a period of length `2n − 2`.
    pub fn paper_line(n: usize, gamma: &[BigRational], theta: BigInt, seed: u64, mode: Mode) -> Result<Self, ConstructError> {
        if gamma.len() + 1 != n {
            return Err(ConstructError::Dimension(format!("need n−1 = {} ratios, got {}", n - 1, gamma.len())));
        }
        let g: Vec<Surd5> = gamma.iter().cloned().map(Surd5::rational).collect();
        Self::build(n, completed_period(&g, &Surd5::golden_square()), theta, seed, mode)
    }

    pub(crate) fn build_offset(
        n: usize,
        offset: usize,
        gamma: Vec<Surd5>,
        theta: BigInt,
        seed: u64,
        mode: Mode,
        threshold: &Surd5,
    ) -> Result<Self, ConstructError> {
        let two = Surd5::from_int(2);
        for g in &gamma {
            match mode {
                Mode::Strict if g < threshold => {
                    return Err(ConstructError::Threshold(format!("ratio {g} below {threshold}")))
                }
                Mode::Relaxed if g <= &two => return Err(ConstructError::Threshold(format!("ratio {g} is not > 2"))),
                _ => {}
            }
        }
        let schedule = GrowthSchedule::new(gamma, theta)?;
        let digits = DigitFamily::seeded(n.saturating_sub(1 + offset).max(1), seed)?;
        let mut lc = Self::from_parts(n, offset, schedule, digits)?;
        lc.mode = mode;
        Ok(lc)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn offset(&self) -> usize {
        self.offset
    }

    pub fn lanes(&self) -> usize {
        self.n - 1 - self.offset
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub(crate) fn set_mode(&mut self, mode: Mode) {
        self.mode = mode;
    }

    pub fn schedule(&self) -> &GrowthSchedule {
        &self.schedule
    }

    pub fn digits(&self) -> &DigitFamily {
        &self.digits
    }

    pub fn theta(&self) -> &BigInt {
        self.schedule.theta()
    }

    fn lane_coord(&self, j: usize) -> usize {
        1 + self.offset + j
    }

    fn theta_pow(&self, e: u64) -> BigInt {
        Pow::pow(self.theta(), e)
    }

    /// `X_0, …, X_N` by the recurrence `X_{k+1} = θ^{⌊α_{k+1}⌋−⌊α_k⌋}X_k + w_{k+1}`.
    pub fn x_vectors(&self, n_max: usize) -> Result<Vec<IntVector>, ConstructError> {
        let mut x = vec![BigInt::zero(); self.n];
        x[0] = self.theta_pow(self.schedule.floor(0)?);
        x[self.lane_coord(self.digits.phi(0))] = BigInt::from(self.digits.value(0)?);
        let mut out = vec![x];
        for k in 1..=n_max {
            let (f0, f1) = (self.schedule.floor(k - 1)?, self.schedule.floor(k)?);
            if f1 <= f0 {
                return Err(ConstructError::Schedule(format!("floors of alpha_{} and alpha_{k} coincide", k - 1)));
            }
            let s = self.theta_pow(f1 - f0);
            let mut next: IntVector = out[k - 1].iter().map(|c| c * &s).collect();
            next[self.lane_coord(self.digits.phi(k))] += BigInt::from(self.digits.value(k)?);
            out.push(next);
        }
        Ok(out)
    }

    pub fn x_vector(&self, n: usize) -> Result<IntVector, ConstructError> {
        Ok(self.x_vectors(n)?.pop().expect("nonempty"))
    }

    /// `σ_{j,N} = Σ_{k ≤ N} u^j_k θ^{−⌊α_k⌋}`.
    pub fn sigma(&self, j: usize, n: usize) -> Result<BigRational, ConstructError> {
        if j >= self.lanes() {
            return Err(ConstructError::Index(format!("lane {j} of {}", self.lanes())));
        }
        let x = self.x_vector(n)?;
        Ok(BigRational::new(x[self.lane_coord(j)].clone(), x[0].clone()))
    }

    /// `w_N = X_N − θ^{⌊α_N⌋−⌊α_{N−1}⌋}X_{N−1}` for `N ≥ 1`.
    pub fn w_vector(&self, n: usize) -> Result<IntVector, ConstructError> {
        if n == 0 {
            return Err(ConstructError::Index("w_N needs N ≥ 1".into()));
        }
        let mut w = vec![BigInt::zero(); self.n];
        w[self.lane_coord(self.digits.phi(n))] = BigInt::from(self.digits.value(n)?);
        Ok(w)
    }

    /// `v_N = w_N / u^{φ(N)}_N`, a canonical basis vector.
    pub fn v_vector(&self, n: usize) -> IntVector {
        let mut v = vec![BigInt::zero(); self.n];
        v[self.lane_coord(self.digits.phi(n))] = BigInt::one();
        v
    }

    /// `B_{N,e} = Span(X_N, …, X_{N+e−1})` carried by the basis `X_N, v_{N+1}, …, v_{N+e−1}`.
    pub fn b_approx(&self, n: usize, e: usize) -> Result<RationalSubspace, ConstructError> {
        if e == 0 || e > self.lanes() {
            return Err(ConstructError::Dimension(format!("e={e} outside 1..={}", self.lanes())));
        }
        let mut basis = vec![self.x_vector(n)?];
        basis.extend((1..e).map(|i| self.v_vector(n + i)));
        Ok(RationalSubspace::from_basis_claim(self.n, basis)?)
    }

    /// `2θ²/(θ−1) · θ^{−⌊α_{M+1}⌋}`, which bounds `|σ_j − σ_{j,M}|` for every lane.
    pub fn tail_bound(&self, m: usize) -> Result<BigRational, ConstructError> {
        let t = self.theta();
        let num = BigInt::from(2) * t * t;
        let den = (t - BigInt::one()) * self.theta_pow(self.schedule.floor(m + 1)?);
        Ok(BigRational::new(num, den))
    }

    /// The target `Span Y` truncated at level `M`.
    pub fn truncated_target(&self, m: usize) -> Result<TruncatedTarget, ConstructError> {
        let x = self.x_vector(m)?;
        let scale = x[0].clone();
        Ok(TruncatedTarget::new(self.n, m, vec![x], vec![scale], self.tail_bound(m)?, vec![self.lanes()])?)
    }

    /// `max_i γ_{i+1}…γ_{i+e}` over the periodic schedule.
    pub fn predicted_mu(&self, e: usize) -> Result<Surd5, ConstructError> {
        let gamma = self.schedule.gamma();
        if let Some(rats) = gamma.iter().map(|g| g.as_rational().cloned()).collect::<Option<Vec<_>>>() {
            let mu = mu_line_formula(&rats, e)?;
            let r = mu.as_finite().ok_or_else(|| ConstructError::Schedule("infinite exponent".into()))?;
            return Ok(Surd5::rational(r.clone()));
        }
        let t = gamma.len();
        (0..t)
            .map(|i| (0..e).fold(Surd5::one(), |p, k| &p * &gamma[(i + k) % t]))
            .max()
            .ok_or_else(|| ConstructError::Schedule("empty period".into()))
    }

    /// The `N` in `range` whose window `γ_{N+1}…γ_{N+e}` reaches [`predicted_mu`], the
    /// indices along which `B_{N,e}` realises the exponent.
    ///
    /// [`predicted_mu`]: LineConstruction::predicted_mu
    pub fn limsup_indices(&self, e: usize, range: std::ops::RangeInclusive<usize>) -> Result<Vec<usize>, ConstructError> {
        let mu = self.predicted_mu(e)?;
        Ok(range
            .filter(|&n| (1..=e).fold(Surd5::one(), |p, k| &p * self.schedule.gamma_at(n + k)) == mu)
            .collect())
    }

    pub fn transcript(&self, k: usize) -> Result<LineTranscript, ConstructError> {
        Ok(LineTranscript {
            n: self.n,
            offset: self.offset,
            theta: self.theta().to_string(),
            gamma: self.schedule.gamma().iter().map(|g| g.to_string()).collect(),
            mode: self.mode,
            seed: self.digits.seed(),
            floors: self.schedule.alphas(k)?.into_iter().map(|(_, f)| f.to_string()).collect(),
            digits: self.digits.family(k)?,
        })
    }
}
