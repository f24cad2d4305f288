use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ConstructError;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Source {
    Seeded(u64),
    Explicit(Vec<u8>),
}

/// Digits `u^j_k`: lane `φ(k) = k mod laneCount` carries a value in `{1, 2}`, every other
/// lane is 0. Seeded values are a pure function of `(seed, k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DigitFamily {
    lane_count: usize,
    source: Source,
}

impl DigitFamily {
    pub fn seeded(lane_count: usize, seed: u64) -> Result<Self, ConstructError> {
        if lane_count == 0 {
            return Err(ConstructError::Dimension("lane count must be ≥ 1".into()));
        }
        Ok(DigitFamily { lane_count, source: Source::Seeded(seed) })
    }

    /// Fixed digit values `u^{φ(k)}_k` for `k < values.len()`.
    pub fn explicit(lane_count: usize, values: Vec<u8>) -> Result<Self, ConstructError> {
        if lane_count == 0 {
            return Err(ConstructError::Dimension("lane count must be ≥ 1".into()));
        }
        if values.iter().any(|v| *v != 1 && *v != 2) {
            return Err(ConstructError::Schedule("digits must be 1 or 2".into()));
        }
        Ok(DigitFamily { lane_count, source: Source::Explicit(values) })
    }

    pub fn lane_count(&self) -> usize {
        self.lane_count
    }

    pub fn seed(&self) -> Option<u64> {
        match self.source {
            Source::Seeded(s) => Some(s),
            Source::Explicit(_) => None,
        }
    }

    pub fn phi(&self, k: usize) -> usize {
        k % self.lane_count
    }

    /// The nonzero digit `u^{φ(k)}_k`.
    pub fn value(&self, k: usize) -> Result<u8, ConstructError> {
        match &self.source {
            Source::Seeded(seed) => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                rng.set_word_pos(k as u128);
                Ok(1 + (rng.next_u32() & 1) as u8)
            }
            Source::Explicit(v) => v.get(k).copied().ok_or(ConstructError::Transcript(k)),
        }
    }

    /// `u^j_k`.
    pub fn digit(&self, j: usize, k: usize) -> Result<u8, ConstructError> {
        if self.phi(k) == j {
            self.value(k)
        } else {
            Ok(0)
        }
    }

    /// `u^{φ(k)}_k` for `k = 0..=K`.
    pub fn family(&self, k: usize) -> Result<Vec<u8>, ConstructError> {
        (0..=k).map(|i| self.value(i)).collect()
    }
}
