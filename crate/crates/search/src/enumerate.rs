//! Complete enumeration of rational subspaces of bounded height.
//!
//! Lines are primitive vectors up to sign. Hyperplanes are the orthogonal complements
//! of lines, since `H(B) = H(B⊥)`. Any other dimension goes through bounded-entry
//! bases:
//!
//! `B ∩ Z^n` is a lattice of rank `e` and covolume `H(B)`, and every successive minimum
//! is at least 1, so Minkowski's second theorem gives `λ_i ≤ γ_e^{e/2} H(B)`. A
//! Korkine–Zolotarev basis has `‖b_i‖² ≤ (i+3)/4 · λ_i²`. With `γ_e ≤ 1 + e/4` every
//! `B` with `H(B)² ≤ h` has a basis of primitive vectors with
//! `‖b_i‖² ≤ (e+3)/4 · (1+e/4)^e · h`. Enumerating all such tuples, keeping those whose
//! Gram determinant is at most `h`, saturating and deduplicating is therefore complete.

use std::collections::BTreeMap;

use exactlin::{ivec, orth_complement, saturate, RationalSubspace};
use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::SearchError;

/// How candidates are produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Strategy {
    PrimitiveVectors,
    Dual,
    BoundedEntries,
    ConstructedFamily,
}

impl Strategy {
    /// The default for `(n, e)`.
    pub fn for_dims(n: usize, e: usize) -> Strategy {
        if e == 1 {
            Strategy::PrimitiveVectors
        } else if e + 1 == n {
            Strategy::Dual
        } else {
            Strategy::BoundedEntries
        }
    }
}

/// Beyond this many basis tuples the bounded-entry enumeration samples instead.
pub const TUPLE_BUDGET: u64 = 20_000_000;

#[derive(Clone, Debug)]
pub struct Enumeration {
    pub subspaces: Vec<RationalSubspace>,
    pub strategy: Strategy,
    /// False when the bounded-entry enumeration fell back to sampling.
    pub complete: bool,
}

pub(crate) fn pool(workers: usize) -> Result<rayon::ThreadPool, SearchError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| SearchError::Workers(e.to_string()))
}

fn dfs(prefix: &mut Vec<i64>, n: usize, rem: i64, nonzero: bool, out: &mut Vec<Vec<i64>>) {
    if prefix.len() == n {
        if nonzero && prefix.iter().fold(0i64, |g, &x| g.gcd(&x)) == 1 {
            out.push(prefix.clone());
        }
        return;
    }
    let r = rem.sqrt();
    let lo = if nonzero { -r } else { 0 };
    for x in lo..=r {
        prefix.push(x);
        dfs(prefix, n, rem - x * x, nonzero || x != 0, out);
        prefix.pop();
    }
}

/// Primitive vectors with `‖v‖² ≤ bound`, first nonzero entry positive, ascending
/// lexicographically.
pub fn primitive_vectors(n: usize, bound: u64, workers: usize) -> Result<Vec<Vec<i64>>, SearchError> {
    if n < 2 {
        return Err(SearchError::Dimension(format!("n = {n} < 2")));
    }
    let bound = i64::try_from(bound).map_err(|_| SearchError::Bound("height bound exceeds i64".into()))?;
    let r = bound.sqrt();
    let parts: Vec<Vec<Vec<i64>>> = pool(workers)?.install(|| {
        (0..=r)
            .into_par_iter()
            .map(|a| {
                let mut out = Vec::new();
                let mut prefix = vec![a];
                dfs(&mut prefix, n, bound - a * a, a != 0, &mut out);
                out
            })
            .collect()
    });
    Ok(parts.into_iter().flatten().collect())
}

fn line(v: &[i64]) -> RationalSubspace {
    RationalSubspace::from_basis_claim(v.len(), vec![ivec(v)]).expect("nonzero primitive vector")
}

/// Every rational line of `Q^n` with `H² ≤ bound`, once each.
pub fn enumerate_lines(n: usize, bound: u64) -> Result<Vec<RationalSubspace>, SearchError> {
    Ok(primitive_vectors(n, bound, 1)?.iter().map(|v| line(v)).collect())
}

/// `⌈(e+3)/4 · (1+e/4)^e · bound⌉`, the squared-norm bound on a reduced basis.
pub fn entry_bound_sq(e: usize, bound: u64) -> u64 {
    let q = |a: usize, b: usize| BigRational::new(BigInt::from(a), BigInt::from(b));
    let mut r = q(e + 3, 4) * BigRational::from_integer(BigInt::from(bound));
    let f = q(e + 4, 4);
    for _ in 0..e {
        r *= &f;
    }
    r.ceil().to_integer().to_u64().unwrap_or(u64::MAX)
}

/// Gram determinant by fraction-free (Bareiss) elimination, `None` on overflow.
fn gram_det_i(vs: &[&[i64]]) -> Option<i128> {
    let k = vs.len();
    let mut g: Vec<Vec<i128>> = vs
        .iter()
        .map(|a| vs.iter().map(|b| a.iter().zip(*b).map(|(x, y)| (*x as i128) * (*y as i128)).sum()).collect())
        .collect();
    let mut sign = 1;
    let mut prev = 1i128;
    for c in 0..k {
        let Some(p) = (c..k).find(|&r| g[r][c] != 0) else { return Some(0) };
        if p != c {
            g.swap(p, c);
            sign = -sign;
        }
        for r in c + 1..k {
            for j in c + 1..k {
                g[r][j] = g[r][j].checked_mul(g[c][c])?.checked_sub(g[r][c].checked_mul(g[c][j])?)? / prev;
            }
            g[r][c] = 0;
        }
        prev = g[c][c];
    }
    Some(sign * g[k - 1][k - 1])
}

fn bounded_entry_tuples(
    n: usize,
    e: usize,
    bound: u64,
    workers: usize,
    seed: u64,
) -> Result<(Vec<RationalSubspace>, bool), SearchError> {
    let vs = primitive_vectors(n, entry_bound_sq(e, bound), workers)?;
    let total = binomial(vs.len() as u64, e as u64);
    let keep = |idx: &[usize]| -> Option<RationalSubspace> {
        let rows: Vec<&[i64]> = idx.iter().map(|&i| vs[i].as_slice()).collect();
        let g = gram_det_i(&rows)?;
        if g <= 0 || g > bound as i128 {
            return None;
        }
        let b = saturate(&rows.iter().map(|r| ivec(r)).collect::<Vec<_>>()).ok()?;
        (b.height_sq() <= &BigInt::from(bound)).then_some(b)
    };
    let (found, complete): (Vec<RationalSubspace>, bool) = if total.is_some_and(|t| t <= TUPLE_BUDGET) {
        let found = pool(workers)?.install(|| {
            (0..vs.len())
                .into_par_iter()
                .flat_map_iter(|first| {
                    let mut out = Vec::new();
                    let mut idx = vec![first];
                    tuples(&mut idx, vs.len(), e, &mut |t| {
                        if let Some(b) = keep(t) {
                            out.push(b);
                        }
                    });
                    out
                })
                .collect()
        });
        (found, true)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut found = Vec::new();
        for _ in 0..TUPLE_BUDGET {
            let mut idx: Vec<usize> = (0..e).map(|_| rng.gen_range(0..vs.len())).collect();
            idx.sort_unstable();
            idx.dedup();
            if idx.len() == e {
                found.extend(keep(&idx));
            }
        }
        (found, false)
    };
    Ok((dedup(found), complete))
}

fn tuples(idx: &mut Vec<usize>, len: usize, e: usize, f: &mut impl FnMut(&[usize])) {
    if idx.len() == e {
        f(idx);
        return;
    }
    let start = idx.last().map_or(0, |&i| i + 1);
    for i in start..len {
        idx.push(i);
        tuples(idx, len, e, f);
        idx.pop();
    }
}

fn binomial(n: u64, k: u64) -> Option<u64> {
    let mut r: u64 = 1;
    for i in 0..k {
        r = r.checked_mul(n.checked_sub(i)?)? / (i + 1);
    }
    Some(r)
}

/// Sorts by Plücker vector and drops repeats.
pub(crate) fn dedup(bs: Vec<RationalSubspace>) -> Vec<RationalSubspace> {
    let mut m = BTreeMap::new();
    for b in bs {
        m.entry(b.plucker().to_vec()).or_insert(b);
    }
    m.into_values().collect()
}

/// Every rational subspace of dimension `e` with `H² ≤ bound`, by the given strategy
/// or the default one for `(n, e)`.
pub fn enumerate_subspaces(
    n: usize,
    e: usize,
    bound: u64,
    strategy: Option<Strategy>,
    workers: usize,
    seed: u64,
) -> Result<Enumeration, SearchError> {
    if n < 2 || e == 0 || e >= n {
        return Err(SearchError::Dimension(format!("need 1 ≤ e ≤ n−1, got n = {n}, e = {e}")));
    }
    let strategy = strategy.unwrap_or(Strategy::for_dims(n, e));
    let (subspaces, complete) = match strategy {
        Strategy::PrimitiveVectors if e == 1 => {
            (primitive_vectors(n, bound, workers)?.iter().map(|v| line(v)).collect(), true)
        }
        Strategy::Dual if e + 1 == n => {
            let hs = primitive_vectors(n, bound, workers)?
                .iter()
                .map(|v| orth_complement(&line(v)))
                .collect::<Result<Vec<_>, _>>()?;
            (hs, true)
        }
        Strategy::BoundedEntries => bounded_entry_tuples(n, e, bound, workers, seed)?,
        s => return Err(SearchError::Strategy { strategy: s, n, e }),
    };
    Ok(Enumeration { subspaces, strategy, complete })
}
