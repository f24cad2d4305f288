use exactlin::matrix::rank_rational;
use num_rational::BigRational;
use num_traits::Zero;

use crate::poly::{charpoly, matmul};
use crate::roots::{roots_in_unit_interval, Root};
use crate::sines::inverse;
use crate::AngleError;

const BITS: u32 = 96;

/// The block `j` whose complementary projection `p̂_j` shrinks `F` the least, with
/// `min_{X∈F} ‖p̂_j X‖²/‖X‖²` as an exact value or a bracket.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectionWitness {
    pub j: usize,
    pub ratio_sq_lo: BigRational,
    pub ratio_sq_hi: BigRational,
    pub exact: bool,
}

fn gram(vs: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    vs.iter().map(|a| vs.iter().map(|b| a.iter().zip(b).map(|(x, y)| x * y).sum()).collect()).collect()
}

/// `p̂_j` zeroes the coordinates of block `j` (1-based). `J` holds block indices.
pub fn projection_lower_bound_witness(
    f: &[Vec<BigRational>],
    j_set: &[usize],
    block_sizes: &[usize],
) -> Result<ProjectionWitness, AngleError> {
    if f.is_empty() || j_set.is_empty() {
        return Err(AngleError::Empty);
    }
    let n: usize = block_sizes.iter().sum();
    if f.iter().any(|v| v.len() != n) {
        return Err(AngleError::DimensionMismatch);
    }
    if j_set.iter().any(|&j| j == 0 || j > block_sizes.len()) {
        return Err(AngleError::Blocks("block index out of range".into()));
    }
    let mut js = j_set.to_vec();
    js.sort_unstable();
    js.dedup();
    if js.len() != j_set.len() {
        return Err(AngleError::Blocks("repeated block index".into()));
    }
    if rank_rational(f) != f.len() {
        return Err(AngleError::RankDeficient);
    }
    if f.len() >= js.len() {
        return Err(AngleError::TooManyDimensions { dim: f.len(), blocks: js.len() });
    }
    let g_inv = inverse(&gram(f)).ok_or(AngleError::RankDeficient)?;
    let mut best: Option<ProjectionWitness> = None;
    for &j in &js {
        let start: usize = block_sizes[..j - 1].iter().sum();
        let end = start + block_sizes[j - 1];
        let projected: Vec<Vec<BigRational>> = f
            .iter()
            .map(|v| v.iter().enumerate().map(|(i, x)| if (start..end).contains(&i) { BigRational::zero() } else { x.clone() }).collect())
            .collect();
        let m = matmul(&g_inv, &gram(&projected));
        let roots = roots_in_unit_interval(&charpoly(&m), BITS);
        let low = roots.first().ok_or_else(|| AngleError::Internal("no eigenvalue in [0,1]".into()))?;
        let w = ProjectionWitness {
            j,
            ratio_sq_lo: low.lo().clone(),
            ratio_sq_hi: low.hi().clone(),
            exact: matches!(low, Root::Exact(..)),
        };
        if best.as_ref().is_none_or(|b| w.ratio_sq_lo > b.ratio_sq_lo) {
            best = Some(w);
        }
    }
    Ok(best.expect("J is nonempty"))
}
