use angles::TruncatedTarget;
use exactlin::{c_constant, Surd5};
use num_bigint::BigInt;
use num_rational::BigRational;

use crate::line::completed_period;
use crate::{ConstructError, DigitFamily, GrowthSchedule, LineConstruction, Mode};

const SEED_STRIDE: u64 = 0xD1B5_4A32_D192_ED03;

/// `A = Span(Y_1, …, Y_d)` built by induction on `d`: `Y_1` is a line with `n − d` lanes
/// and `d − 1` zeros after its leading 1, and `Y_2 … Y_d` is the construction one level
/// down run with every ratio equal to `C_{d−1}`.
#[derive(Clone, Debug)]
pub struct RecursiveConstruction {
    n: usize,
    d: usize,
    ladder: Vec<Surd5>,
    lines: Vec<LineConstruction>,
    mode: Mode,
}

impl RecursiveConstruction {
    /// `gamma` holds `γ_1 … γ_{n−d}`. Strict mode uses the exact ladder `C_1 … C_d` and
    /// requires `γ_i ≥ C_d`; relaxed mode replaces every `C_ℓ` by `proxy` when given.
    pub fn build(
        n: usize,
        d: usize,
        gamma: &[BigRational],
        theta: BigInt,
        seed: u64,
        mode: Mode,
        proxy: Option<BigRational>,
    ) -> Result<Self, ConstructError> {
        if d == 0 || d >= n {
            return Err(ConstructError::Dimension(format!("d={d} outside 1..{n}")));
        }
        if gamma.len() != n - d {
            return Err(ConstructError::Dimension(format!("need n−d = {} ratios, got {}", n - d, gamma.len())));
        }
        let ladder: Vec<Surd5> = (1..=d)
            .map(|l| match (&proxy, mode) {
                (Some(p), Mode::Relaxed) => Surd5::rational(p.clone()),
                _ => c_constant(l, n),
            })
            .collect();
        if ladder.iter().any(|c| c <= &Surd5::from_int(2)) {
            return Err(ConstructError::Threshold("ladder constants must exceed 2".into()));
        }
        let user: Vec<Surd5> = gamma.iter().cloned().map(Surd5::rational).collect();
        let top = &ladder[d - 1];
        for g in &user {
            match mode {
                Mode::Strict if g < top => return Err(ConstructError::Threshold(format!("ratio {g} below C_{d} = {top}"))),
                Mode::Relaxed if g <= &Surd5::from_int(2) => {
                    return Err(ConstructError::Threshold(format!("ratio {g} is not > 2")))
                }
                _ => {}
            }
        }
        let mut lines = Vec::with_capacity(d);
        for level in (1..=d).rev() {
            let c = &ladder[level - 1];
            let lanes = n - level;
            let base = if level == d { user.clone() } else { vec![c.clone(); lanes] };
            let schedule = GrowthSchedule::new(completed_period(&base, c), theta.clone())?;
            let s = seed.wrapping_add(SEED_STRIDE.wrapping_mul((d - level) as u64));
            let mut line = LineConstruction::from_parts(n, level - 1, schedule, DigitFamily::seeded(lanes, s)?)?;
            line.set_mode(mode);
            lines.push(line);
        }
        Ok(RecursiveConstruction { n, d, ladder, lines, mode })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// `C_1 … C_d` as used (exact or the relaxed proxy).
    pub fn ladder(&self) -> &[Surd5] {
        &self.ladder
    }

    /// `Y_j` (1-based).
    pub fn line(&self, j: usize) -> &LineConstruction {
        &self.lines[j - 1]
    }

    /// All `Y_j` truncated at level `M`.
    pub fn truncated_target(&self, m: usize) -> Result<TruncatedTarget, ConstructError> {
        let mut gens = Vec::new();
        let mut scales = Vec::new();
        let mut tail = BigRational::from_integer(0.into());
        let mut coords = Vec::new();
        for l in &self.lines {
            let x = l.x_vector(m)?;
            scales.push(x[0].clone());
            gens.push(x);
            tail = tail.max(l.tail_bound(m)?);
            coords.push(l.lanes());
        }
        Ok(TruncatedTarget::new(self.n, m, gens, scales, tail, coords)?)
    }
}
