//! Rank certificates for the Jacobian of `β ↦ (Ω_{(e,k)}(β))_{(e,k)∈U}`.

use std::collections::BTreeSet;

use exactlin::matrix::rank_rational;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::omega::{check_beta, chi, jacobian_closed_form, Var};
use crate::{SpectrumError, SpectrumTarget};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum CertificateLevel {
    /// Fresh-index order found: the minor is triangular with positive diagonal for every `β > 0`.
    Triangular,
    /// Full rank at some sampled `β` only.
    GenericRank,
    Unknown,
}

/// An order of `U` (indices into `U`) and, for each position, an index of `χ` that no
/// earlier member uses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TriangularWitness {
    pub order: Vec<usize>,
    pub fresh: Vec<Var>,
}

fn fresh_index(x: &BTreeSet<Var>, others: &[&BTreeSet<Var>]) -> Option<Var> {
    x.iter().copied().find(|v| others.iter().all(|o| !o.contains(v)))
}

fn verify_order(chis: &[BTreeSet<Var>], order: &[usize]) -> Option<TriangularWitness> {
    let mut fresh = Vec::with_capacity(order.len());
    for (j, &a) in order.iter().enumerate() {
        let before: Vec<&BTreeSet<Var>> = order[..j].iter().map(|&b| &chis[b]).collect();
        fresh.push(fresh_index(&chis[a], &before)?);
    }
    Some(TriangularWitness { order: order.to_vec(), fresh })
}

/// The claimed order if it works, otherwise one found by repeatedly moving to the end a
/// member with an index private among those left. The greedy search fails only when no
/// valid order exists: dropping the last member of a valid order leaves a valid order.
pub fn triangular_order(t: &SpectrumTarget) -> Result<Option<TriangularWitness>, SpectrumError> {
    let chis = t.u.iter().map(|&(e, k)| chi(e, k, t.d, t.m)).collect::<Result<Vec<_>, _>>()?;
    if let Some(w) = t.order.as_deref().and_then(|o| verify_order(&chis, o)) {
        return Ok(Some(w));
    }
    let mut left: Vec<usize> = (0..t.u.len()).collect();
    let mut rev = Vec::with_capacity(left.len());
    while !left.is_empty() {
        let pick = (0..left.len()).rev().find(|&p| {
            let others: Vec<&BTreeSet<Var>> =
                left.iter().enumerate().filter(|&(q, _)| q != p).map(|(_, &b)| &chis[b]).collect();
            fresh_index(&chis[left[p]], &others).is_some()
        });
        let Some(p) = pick else { return Ok(None) };
        rev.push(left.remove(p));
    }
    rev.reverse();
    Ok(verify_order(&chis, &rev))
}

fn col(m: usize, (i, l): Var) -> usize {
    (i - 1) * m + (l - 1)
}

/// Whether the minor picked out by the witness is lower triangular with nonzero diagonal.
pub(crate) fn minor_is_triangular(jac: &[Vec<BigRational>], w: &TriangularWitness, m: usize) -> bool {
    w.order.iter().enumerate().all(|(r, &a)| {
        w.fresh.iter().enumerate().all(|(c, &x)| {
            let g = &jac[a][col(m, x)];
            match r.cmp(&c) {
                std::cmp::Ordering::Less => g.is_zero(),
                std::cmp::Ordering::Equal => !g.is_zero(),
                std::cmp::Ordering::Greater => true,
            }
        })
    })
}

const PRIMES: [u32; 60] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107,
    109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191, 193, 197, 199, 211, 223, 227, 229, 233,
    239, 241, 251, 257, 263, 269, 271, 277, 281,
];

/// A `d × m` table `β_{i,ℓ} = p/r` with all numerators and denominators distinct primes.
pub fn distinct_prime_beta(d: usize, m: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<BigRational>> {
    let mut pool = PRIMES.to_vec();
    let mut extra = 283u32;
    while pool.len() < 2 * d * m {
        if (2..extra).take_while(|p| p * p <= extra).all(|p| extra % p != 0) {
            pool.push(extra);
        }
        extra += 2;
    }
    pool.shuffle(rng);
    (0..d)
        .map(|i| {
            (0..m)
                .map(|l| {
                    let j = 2 * (i * m + l);
                    BigRational::new(BigInt::from(pool[j]), BigInt::from(pool[j + 1]))
                })
                .collect()
        })
        .collect()
}

/// For `U` with every `k = d`: the Jacobian after `D_{i,ℓ} ← D_{i,ℓ} − (β_{i,ℓ+1}/β_{i,ℓ}) D_{i,ℓ+1}`
/// (original columns on the right), rows in `U` order, columns reordered by `(ℓ, i)`.
/// `None` if some `k ≠ d`.
pub fn column_reduction(
    t: &SpectrumTarget,
    beta: &[Vec<BigRational>],
) -> Result<Option<Vec<Vec<BigRational>>>, SpectrumError> {
    if t.u.iter().any(|&(_, k)| k != t.d) {
        return Ok(None);
    }
    check_beta(beta, t.d, t.m)?;
    let (d, m) = (t.d, t.m);
    let jac = jacobian_closed_form(t, beta)?;
    let reduced = jac
        .iter()
        .map(|row| {
            let mut g = vec![BigRational::zero(); d * m];
            for l in 1..=m {
                for i in 1..=d {
                    let mut x = row[col(m, (i, l))].clone();
                    if l < m {
                        x -= &beta[i - 1][l] / &beta[i - 1][l - 1] * &row[col(m, (i, l + 1))];
                    }
                    g[(l - 1) * d + (i - 1)] = x;
                }
            }
            g
        })
        .collect();
    Ok(Some(reduced))
}

fn upper_triangular_square(g: &[Vec<BigRational>]) -> bool {
    g.iter().enumerate().all(|(r, row)| row.len() == g.len() && !row[r].is_zero() && row[..r].iter().all(Zero::is_zero))
}

fn ser_pairs<S: Serializer>(v: &[(usize, usize)], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|&(a, b)| [a, b]))
}

fn ser_opt_pairs<S: Serializer>(v: &Option<Vec<(usize, usize)>>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(v) => ser_pairs(v, s),
        None => s.serialize_none(),
    }
}

fn ser_beta<S: Serializer>(v: &Option<Vec<Vec<BigRational>>>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(b) => s.collect_seq(b.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>())),
        None => s.serialize_none(),
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RankCertificate {
    pub n: usize,
    pub d: usize,
    pub m: usize,
    #[serde(rename = "U", serialize_with = "ser_pairs")]
    pub u: Vec<(usize, usize)>,
    pub certificate_level: CertificateLevel,
    /// Members of `U` in witness order, when the fresh-index order exists.
    #[serde(serialize_with = "ser_opt_pairs")]
    pub witness_order: Option<Vec<(usize, usize)>>,
    #[serde(serialize_with = "ser_opt_pairs")]
    pub fresh_indices: Option<Vec<(usize, usize)>>,
    /// First sampled `β` with full rank.
    #[serde(serialize_with = "ser_beta")]
    pub witness_beta: Option<Vec<Vec<BigRational>>>,
    pub trials: usize,
    pub full_rank_trials: usize,
    pub min_rank: usize,
    /// For square families with every `k = d`: whether the column-reduced Jacobian is
    /// upper triangular with nonzero diagonal at every trial.
    pub column_reduction: Option<bool>,
    pub diagnostic: Option<String>,
}

/// Fresh-index order search, then exact rank at `trials` seeded distinct-prime `β`.
pub fn rank_certify(t: &SpectrumTarget, trials: usize, seed: u64) -> Result<RankCertificate, SpectrumError> {
    let witness = triangular_order(t)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let size = t.u.len();
    let square_kd = size == t.dm() && t.u.iter().all(|&(_, k)| k == t.d);
    let mut sorted = t.clone();
    sorted.u.sort();

    let (mut full, mut min_rank, mut witness_beta) = (0, size, None);
    let mut tri_ok = witness.is_some();
    let mut reduction_ok = square_kd.then_some(true);
    for _ in 0..trials {
        let beta = distinct_prime_beta(t.d, t.m, &mut rng);
        let jac = jacobian_closed_form(t, &beta)?;
        let r = rank_rational(&jac);
        min_rank = min_rank.min(r);
        if r == size {
            full += 1;
            witness_beta.get_or_insert_with(|| beta.clone());
        }
        if let Some(w) = &witness {
            tri_ok &= minor_is_triangular(&jac, w, t.m);
        }
        if let Some(ok) = reduction_ok.as_mut() {
            *ok &= column_reduction(&sorted, &beta)?.is_some_and(|g| upper_triangular_square(&g));
        }
    }
    let level = match (full > 0, tri_ok) {
        (true, true) => CertificateLevel::Triangular,
        (true, false) => CertificateLevel::GenericRank,
        (false, _) => CertificateLevel::Unknown,
    };
    let diagnostic = match level {
        CertificateLevel::Unknown if trials == 0 => Some("no trials run".to_string()),
        CertificateLevel::Unknown => Some(format!("rank {min_rank} < #U = {size} at every sampled β")),
        CertificateLevel::GenericRank if witness.is_none() => Some("no fresh-index order exists".to_string()),
        _ => None,
    };
    Ok(RankCertificate {
        n: t.n,
        d: t.d,
        m: t.m,
        u: t.u.clone(),
        certificate_level: level,
        witness_order: witness.as_ref().map(|w| w.order.iter().map(|&i| t.u[i]).collect()),
        fresh_indices: witness.map(|w| w.fresh),
        witness_beta,
        trials,
        full_rank_trials: full,
        min_rank: if trials == 0 { 0 } else { min_rank },
        column_reduction: reduction_ok,
        diagnostic,
    })
}
