use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::matrix::{clear_denominators, det};
use crate::{ExactError, IntVector};

/// All `k`-subsets of `0..n` in colex order (compare largest element first).
pub fn colex_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        // colex successor: bump the first index that can move
        let mut i = 0;
        while i < k {
            let limit = if i + 1 < k { cur[i + 1] } else { n };
            if cur[i] + 1 < limit {
                cur[i] += 1;
                for (j, c) in cur.iter_mut().enumerate().take(i) {
                    *c = j;
                }
                break;
            }
            i += 1;
        }
        if i == k {
            break;
        }
    }
    out
}

/// Grade-`k` element of the exterior algebra of `Q^n`, coordinates in colex order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiVector {
    n: usize,
    k: usize,
    coords: Vec<BigRational>,
}

impl MultiVector {
    pub fn new(n: usize, k: usize, coords: Vec<BigRational>) -> Result<Self, ExactError> {
        if coords.len() != colex_subsets(n, k).len() {
            return Err(ExactError::DimensionMismatch);
        }
        Ok(MultiVector { n, k, coords })
    }

    pub fn from_integers(n: usize, k: usize, coords: &[BigInt]) -> Result<Self, ExactError> {
        MultiVector::new(n, k, coords.iter().map(|c| BigRational::from_integer(c.clone())).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn grade(&self) -> usize {
        self.k
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    /// Coordinate at a strictly increasing 0-based index tuple.
    pub fn get(&self, idx: &[usize]) -> Option<&BigRational> {
        let pos = colex_subsets(self.n, self.k).iter().position(|s| s == idx)?;
        self.coords.get(pos)
    }

    pub fn entries(&self) -> impl Iterator<Item = (Vec<usize>, &BigRational)> {
        colex_subsets(self.n, self.k).into_iter().zip(self.coords.iter())
    }

    pub fn norm_sq(&self) -> BigRational {
        self.coords.iter().map(|c| c * c).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }
}

/// Integer minors of the matrix whose columns are `vs`, colex order over row subsets.
pub fn wedge_int(vs: &[IntVector]) -> Result<Vec<BigInt>, ExactError> {
    let k = vs.len();
    if k == 0 {
        return Err(ExactError::Empty);
    }
    let n = vs[0].len();
    if vs.iter().any(|v| v.len() != n) || k > n {
        return Err(ExactError::DimensionMismatch);
    }
    Ok(colex_subsets(n, k)
        .iter()
        .map(|rows| {
            let m: Vec<Vec<BigInt>> = rows.iter().map(|&r| vs.iter().map(|v| v[r].clone()).collect()).collect();
            det(&m)
        })
        .collect())
}

pub fn wedge(vs: &[IntVector]) -> Result<MultiVector, ExactError> {
    let c = wedge_int(vs)?;
    MultiVector::from_integers(vs[0].len(), vs.len(), &c)
}

/// Wedge of rational vectors: denominators are cleared per vector and the product
/// of the scale factors divided back out.
pub fn wedge_rat(vs: &[Vec<BigRational>]) -> Result<MultiVector, ExactError> {
    if vs.is_empty() {
        return Err(ExactError::Empty);
    }
    let mut scale = BigRational::one();
    let mut ints = Vec::with_capacity(vs.len());
    for v in vs {
        let iv = clear_denominators(v);
        // v = (v_i / iv_i) iv for any nonzero entry
        if let Some(i) = iv.iter().position(|x| !x.is_zero()) {
            scale *= &v[i] / BigRational::from_integer(iv[i].clone());
        } else {
            scale = BigRational::zero();
        }
        ints.push(iv);
    }
    let c = wedge_int(&ints)?;
    MultiVector::new(
        vs[0].len(),
        vs.len(),
        c.into_iter().map(|x| BigRational::from_integer(x) * &scale).collect(),
    )
}
