use angles::{PrecisionConfig, TruncatedTarget};
use exactlin::{IntVector, RationalSubspace, Surd5};
use exponents::{extend_row, mu_block_formula, v_q, validate_beta_hypotheses, ExponentValue, HypothesisReport};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::{ConstructError, LineConstruction, Mode};

const SEED_STRIDE: u64 = 0x9E37_79B9_7F4A_7C15;

/// `d` orthogonal copies of the line construction in `R^{m+1}`, block `i` occupying
/// coordinates `(i−1)(m+1) … i(m+1)−1` (0-based) of `R^n`, `n = (m+1)d`.
#[derive(Clone, Debug)]
pub struct BlockConstruction {
    d: usize,
    m: usize,
    beta: Vec<Vec<BigRational>>,
    extended: Vec<Vec<BigRational>>,
    lines: Vec<LineConstruction>,
    mode: Mode,
    report: Option<HypothesisReport>,
}

impl BlockConstruction {
    /// Rows have `m` entries (the extension `β_{i,m+1}` defaults to the row minimum) or
    /// `m + 1`. Strict mode requires the growth hypotheses for the given `c₂`.
    pub fn build(
        d: usize,
        m: usize,
        beta: Vec<Vec<BigRational>>,
        theta: BigInt,
        seed: u64,
        mode: Mode,
        c2: &BigRational,
        prec: &PrecisionConfig,
    ) -> Result<Self, ConstructError> {
        if d == 0 || m == 0 || beta.len() != d {
            return Err(ConstructError::Dimension(format!("need d ≥ 1 rows and m ≥ 1, got {} rows", beta.len())));
        }
        let report = match mode {
            Mode::Strict => {
                let r = validate_beta_hypotheses(d, m, &beta, c2, prec)?;
                if !r.stated_hypotheses_hold {
                    let failed: Vec<&str> = r.checks.iter().filter(|c| !c.holds).map(|c| c.name.as_str()).collect();
                    return Err(ConstructError::Threshold(failed.join("; ")));
                }
                Some(r)
            }
            Mode::Relaxed => None,
        };
        let extended: Vec<Vec<BigRational>> = beta.iter().map(|r| extend_row(r, m)).collect::<Result<_, _>>()?;
        let lines = extended
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let gamma = row.iter().cloned().map(Surd5::rational).collect();
                let s = seed.wrapping_add(SEED_STRIDE.wrapping_mul(i as u64));
                LineConstruction::build_offset(m + 1, 0, gamma, theta.clone(), s, mode, &Surd5::golden_square())
            })
            .collect::<Result<_, _>>()?;
        Ok(BlockConstruction { d, m, beta, extended, lines, mode, report })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        (self.m + 1) * self.d
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn beta(&self) -> &[Vec<BigRational>] {
        &self.beta
    }

    /// Rows after the 2m-periodic extension (one period each).
    pub fn extended_beta(&self) -> &[Vec<BigRational>] {
        &self.extended
    }

    /// `c₁^d = 1 + 1/m`.
    pub fn c1_pow_d(&self) -> BigRational {
        BigRational::new(BigInt::from(self.m + 1), BigInt::from(self.m))
    }

    pub fn hypothesis_report(&self) -> Option<&HypothesisReport> {
        self.report.as_ref()
    }

    /// Line of block `i` (1-based), living in `R^{m+1}`.
    pub fn line(&self, i: usize) -> &LineConstruction {
        &self.lines[i - 1]
    }

    fn embed(&self, i: usize, v: &[BigInt]) -> IntVector {
        let mut out = vec![BigInt::zero(); self.n()];
        let start = (i - 1) * (self.m + 1);
        out[start..start + self.m + 1].clone_from_slice(v);
        out
    }

    fn check_block(&self, i: usize) -> Result<(), ConstructError> {
        if i == 0 || i > self.d {
            return Err(ConstructError::Index(format!("block {i} outside 1..={}", self.d)));
        }
        Ok(())
    }

    /// `X_{N,i}` embedded in `R^n`.
    pub fn x_embedded(&self, n: usize, i: usize) -> Result<IntVector, ConstructError> {
        self.check_block(i)?;
        Ok(self.embed(i, &self.lines[i - 1].x_vector(n)?))
    }

    /// `C^J_N = ⊕_q B^{j_q}_{N_q, v_q}` with `v_q` from `(e, #J)`. A block with `v_q = m+1`
    /// is the whole coordinate block.
    pub fn c_approx(&self, j: &[usize], e: usize, nvec: &[usize]) -> Result<RationalSubspace, ConstructError> {
        let k = j.len();
        if k == 0 || nvec.len() != k {
            return Err(ConstructError::Index(format!("#J = {k} with {} levels", nvec.len())));
        }
        if j.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ConstructError::Index("J must be strictly increasing".into()));
        }
        for &i in j {
            self.check_block(i)?;
        }
        if e < k || e >= k * (self.m + 1) {
            return Err(ConstructError::Dimension(format!("e={e} outside {k}..{}", k * (self.m + 1))));
        }
        let vs = v_q(e, k)?;
        let mut basis = Vec::new();
        for ((&i, &v), &nq) in j.iter().zip(&vs).zip(nvec) {
            if v == self.m + 1 {
                for c in 0..=self.m {
                    let mut u = vec![BigInt::zero(); self.m + 1];
                    u[c] = BigInt::one();
                    basis.push(self.embed(i, &u));
                }
            } else {
                let b = self.lines[i - 1].b_approx(nq, v)?;
                basis.extend(b.basis().iter().map(|x| self.embed(i, x)));
            }
        }
        Ok(RationalSubspace::from_basis_claim(self.n(), basis)?)
    }

    /// `A_J = Span(Y_j : j ∈ J)` truncated at level `M` in every block.
    pub fn truncated_target(&self, j: &[usize], m_level: usize) -> Result<TruncatedTarget, ConstructError> {
        let mut gens = Vec::new();
        let mut scales = Vec::new();
        let mut tail = BigRational::zero();
        for &i in j {
            let x = self.x_embedded(m_level, i)?;
            scales.push(self.lines[i - 1].x_vector(m_level)?[0].clone());
            gens.push(x);
            tail = tail.max(self.lines[i - 1].tail_bound(m_level)?);
        }
        Ok(TruncatedTarget::new(self.n(), m_level, gens, scales, tail, vec![self.m; j.len()])?)
    }

    /// `μ_n(A|e)_{k−g}` from the closed form.
    pub fn predicted_mu(&self, e: usize, k: usize) -> Result<ExponentValue, ConstructError> {
        Ok(mu_block_formula(self.d, self.m, &self.beta, e, k)?)
    }
}
