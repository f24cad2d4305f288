use std::sync::RwLock;

use exactlin::Surd5;
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};

use crate::ConstructError;

/// Largest `⌊α_k⌋` a schedule will produce unless the caller raises the cap.
pub const DEFAULT_FLOOR_CAP: u64 = 1_000_000;

/// `α_0 = 1`, `α_{k+1} = γ_{k+1}α_k` for a periodic `γ`, with exact floors. Entries may be
/// quadratic surds so that the constants `C_d` can be used without rounding.
#[derive(Debug)]
pub struct GrowthSchedule {
    gamma: Vec<Surd5>,
    theta: BigInt,
    cap: u64,
    memo: RwLock<Vec<(Surd5, BigInt)>>,
}

impl Clone for GrowthSchedule {
    fn clone(&self) -> Self {
        GrowthSchedule {
            gamma: self.gamma.clone(),
            theta: self.theta.clone(),
            cap: self.cap,
            memo: RwLock::new(self.memo.read().expect("schedule memo").clone()),
        }
    }
}

pub fn is_prime(p: &BigInt) -> bool {
    let Some(p) = p.to_u64() else { return false };
    if p < 2 {
        return false;
    }
    let mut q = 2u64;
    while q * q <= p {
        if p % q == 0 {
            return false;
        }
        q += 1;
    }
    true
}

impl GrowthSchedule {
    /// `gamma` is one period; every entry must exceed 1 and `theta` must be a prime ≥ 5.
    pub fn new(gamma: Vec<Surd5>, theta: BigInt) -> Result<Self, ConstructError> {
        if gamma.is_empty() {
            return Err(ConstructError::Schedule("empty period".into()));
        }
        if let Some(g) = gamma.iter().find(|g| **g <= Surd5::one()) {
            return Err(ConstructError::Schedule(format!("entry {g} is not > 1")));
        }
        if theta < BigInt::from(5) || !is_prime(&theta) {
            return Err(ConstructError::Theta(theta.to_string()));
        }
        Ok(GrowthSchedule { gamma, theta, cap: DEFAULT_FLOOR_CAP, memo: RwLock::new(vec![(Surd5::one(), BigInt::one())]) })
    }

    pub fn with_floor_cap(mut self, cap: u64) -> Self {
        self.cap = cap;
        self
    }

    pub fn gamma(&self) -> &[Surd5] {
        &self.gamma
    }

    pub fn period(&self) -> usize {
        self.gamma.len()
    }

    pub fn theta(&self) -> &BigInt {
        &self.theta
    }

    /// `γ_k` for `k ≥ 1` (periodic).
    pub fn gamma_at(&self, k: usize) -> &Surd5 {
        &self.gamma[(k - 1) % self.gamma.len()]
    }

    fn extend_to(&self, k: usize) -> Result<(), ConstructError> {
        if self.memo.read().expect("schedule memo").len() > k {
            return Ok(());
        }
        let mut memo = self.memo.write().expect("schedule memo");
        while memo.len() <= k {
            let i = memo.len();
            let alpha = self.gamma_at(i) * &memo[i - 1].0;
            let floor = alpha.floor();
            if floor > BigInt::from(self.cap) {
                return Err(ConstructError::FloorCap { index: i, cap: self.cap.to_string() });
            }
            memo.push((alpha, floor));
        }
        Ok(())
    }

    pub fn alpha(&self, k: usize) -> Result<Surd5, ConstructError> {
        self.extend_to(k)?;
        Ok(self.memo.read().expect("schedule memo")[k].0.clone())
    }

    pub fn floor(&self, k: usize) -> Result<u64, ConstructError> {
        self.extend_to(k)?;
        Ok(self.memo.read().expect("schedule memo")[k].1.to_u64().expect("floor below cap"))
    }

    /// `(α_k, ⌊α_k⌋)` for `k = 0..=K`.
    pub fn alphas(&self, k: usize) -> Result<Vec<(Surd5, BigInt)>, ConstructError> {
        self.extend_to(k)?;
        Ok(self.memo.read().expect("schedule memo")[..=k].to_vec())
    }
}

/// `(α_k, ⌊α_k⌋)` for `k = 0..=K` and the periodic schedule `gamma`.
pub fn alpha_sequence(gamma: &[Surd5], k: usize) -> Result<Vec<(Surd5, BigInt)>, ConstructError> {
    GrowthSchedule::new(gamma.to_vec(), BigInt::from(5))?.alphas(k)
}
