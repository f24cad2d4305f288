use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::value::{f_func, g_func, kmax, rat, v_q, ExponentValue};
use crate::ExpError;

/// Periodic window maximum `max_{i<T} γ_{i+1}⋯γ_{i+e}` with `γ` of period `T = gamma.len()`.
pub fn mu_line_formula(gamma: &[BigRational], e: usize) -> Result<ExponentValue, ExpError> {
    if gamma.is_empty() || e == 0 {
        return Err(ExpError::Domain("line formula needs e ≥ 1 and a nonempty period".into()));
    }
    let t = gamma.len();
    let best = (0..t)
        .map(|i| (0..e).map(|s| gamma[(i + s) % t].clone()).product::<BigRational>())
        .max()
        .unwrap();
    Ok(ExponentValue::Finite(best))
}

/// First-angle exponent of the line family: `max_{0 ≤ i ≤ n−d−e} γ_{i+1}⋯γ_{i+e}`, no wrap.
pub fn mu_first_angle(gamma: &[BigRational], e: usize) -> Result<ExponentValue, ExpError> {
    if e == 0 || e > gamma.len() {
        return Err(ExpError::Domain(format!("e={e} outside 1..={}", gamma.len())));
    }
    let best = (0..=gamma.len() - e).map(|i| gamma[i..i + e].iter().cloned().product::<BigRational>()).max().unwrap();
    Ok(ExponentValue::Finite(best))
}

/// The 2m-periodic row `β_1 … β_m, β_{m+1}, …, β_{m+1}` (`m − 1` copies of the
/// extension entry after the first). `row` has `m` entries (extension defaults to the
/// row minimum) or `m + 1`.
pub fn extend_row(row: &[BigRational], m: usize) -> Result<Vec<BigRational>, ExpError> {
    if m == 0 || (row.len() != m && row.len() != m + 1) {
        return Err(ExpError::Domain(format!("row of length {} for m={m}", row.len())));
    }
    let ext = if row.len() == m + 1 { row[m].clone() } else { row.iter().min().unwrap().clone() };
    let mut out = row[..m].to_vec();
    out.extend(std::iter::repeat(ext).take(m));
    Ok(out)
}

fn check_block(d: usize, m: usize, beta: &[Vec<BigRational>], e: usize, k: usize) -> Result<usize, ExpError> {
    if beta.len() != d || beta.iter().any(|r| r.len() < m) {
        return Err(ExpError::Domain(format!("need {d} rows of at least {m} entries")));
    }
    let n = (m + 1) * d;
    let g = g_func(d, e, n);
    if e == 0 || e >= n {
        return Err(ExpError::Domain(format!("e={e} outside 1..{n}")));
    }
    if k < 1 + g || k > d.min(e) {
        return Err(ExpError::Domain(format!("k={k} outside {}..={}", 1 + g, d.min(e))));
    }
    if e >= k * (m + 1) {
        return Err(ExpError::Domain(format!("e={e} must be < k(m+1)={}", k * (m + 1))));
    }
    Ok(f_func(e, m * k))
}

/// `1 / Σ_{q=1+f}^{k} 1/K_{j_q, v_q}` for the given rows (1-based block indices).
fn harmonic(beta: &[Vec<BigRational>], m: usize, rows: &[usize], vs: &[usize], f: usize) -> Result<BigRational, ExpError> {
    let mut s = BigRational::zero();
    for q in f..rows.len() {
        s += kmax(&beta[rows[q] - 1][..m], vs[q])?.recip();
    }
    Ok(s.recip())
}

/// Block construction exponent `μ_n(A|e)_{k−g}` with rows `j_q = q + d − k`.
pub fn mu_block_formula(d: usize, m: usize, beta: &[Vec<BigRational>], e: usize, k: usize) -> Result<ExponentValue, ExpError> {
    let f = check_block(d, m, beta, e, k)?;
    let vs = v_q(e, k)?;
    let rows: Vec<usize> = (1..=k).map(|q| q + d - k).collect();
    Ok(ExponentValue::Finite(harmonic(beta, m, &rows, &vs, f)?))
}

#[derive(Clone, Debug, Serialize)]
pub struct BlockIndexReport {
    /// Rows `q + d − k`.
    pub top_rows: String,
    /// Rows `q + d − k + 1`; absent when that runs past row `d`.
    pub shifted_rows: Option<String>,
    pub subset_max: String,
    pub argmax: Vec<usize>,
    pub top_rows_match: bool,
    pub shifted_rows_match: bool,
}

/// Evaluates both row conventions and the maximum over every `J ⊂ {1..d}` with `|J| = k`.
pub fn block_index_report(d: usize, m: usize, beta: &[Vec<BigRational>], e: usize, k: usize) -> Result<BlockIndexReport, ExpError> {
    let f = check_block(d, m, beta, e, k)?;
    let vs = v_q(e, k)?;
    let top: Vec<usize> = (1..=k).map(|q| q + d - k).collect();
    let top_v = harmonic(beta, m, &top, &vs, f)?;
    let shifted: Vec<usize> = (1..=k).map(|q| q + d - k + 1).collect();
    let shifted_v = match shifted.iter().all(|&j| j <= d) {
        true => Some(harmonic(beta, m, &shifted, &vs, f)?),
        false => None,
    };
    let (best, arg) = subset_max(d, m, beta, e, k)?;
    Ok(BlockIndexReport {
        top_rows: top_v.to_string(),
        shifted_rows: shifted_v.as_ref().map(|v| v.to_string()),
        subset_max: best.to_string(),
        argmax: arg,
        top_rows_match: top_v == best,
        shifted_rows_match: shifted_v.as_ref() == Some(&best),
    })
}

/// `max_{J, |J| = k} 1/Σ_{q>f} 1/K_{j_q,v_q}` over strictly increasing `J`.
pub fn subset_max(d: usize, m: usize, beta: &[Vec<BigRational>], e: usize, k: usize) -> Result<(BigRational, Vec<usize>), ExpError> {
    let f = check_block(d, m, beta, e, k)?;
    let vs = v_q(e, k)?;
    let mut best: Option<(BigRational, Vec<usize>)> = None;
    for j in increasing_tuples(d, k) {
        let v = harmonic(beta, m, &j, &vs, f)?;
        if best.as_ref().map_or(true, |(b, _)| &v > b) {
            best = Some((v, j));
        }
    }
    Ok(best.unwrap())
}

/// Strictly increasing `k`-tuples from `1..=d`, lexicographic.
pub(crate) fn increasing_tuples(d: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, d: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for j in start..=d {
            cur.push(j);
            go(j + 1, d, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(1, d, k, &mut Vec::new(), &mut out);
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RoyReport {
    pub holds: bool,
    pub violated: Option<String>,
}

/// Checks `μ₁ ≥ n/(n−1)` and, for `2 ≤ e ≤ n−1`,
/// `eμ_e/(μ_e+e−1) ≤ μ_{e−1} ≤ (n−e)μ_e/(n−e+1)`.
pub fn roy_check(n: usize, mu: &[ExponentValue]) -> Result<RoyReport, ExpError> {
    if n < 2 || mu.len() != n - 1 {
        return Err(ExpError::Domain(format!("expected {} exponents, got {}", n.saturating_sub(1), mu.len())));
    }
    if mu.iter().any(|v| matches!(v, ExponentValue::Finite(r) if r < &BigRational::one())) {
        return Err(ExpError::Domain("exponents must lie in [1, ∞]".into()));
    }
    let fail = |s: String| Ok(RoyReport { holds: false, violated: Some(s) });
    let first_bound = ExponentValue::Finite(BigRational::new((n as i64).into(), (n as i64 - 1).into()));
    if mu[0] < first_bound {
        return fail(format!("mu_1 = {} < {}", mu[0], first_bound));
    }
    for e in 2..n {
        let (prev, cur) = (&mu[e - 2], &mu[e - 1]);
        let lower = match cur {
            ExponentValue::Infinite => ExponentValue::Finite(rat(e as i64)),
            ExponentValue::Finite(x) => ExponentValue::Finite(x * rat(e as i64) / (x + rat(e as i64 - 1))),
        };
        if prev < &lower {
            return fail(format!("mu_{} = {} < {} (lower bound at e={e})", e - 1, prev, lower));
        }
        let upper = match cur {
            ExponentValue::Infinite => ExponentValue::Infinite,
            ExponentValue::Finite(x) => ExponentValue::Finite(x * rat((n - e) as i64) / rat((n - e + 1) as i64)),
        };
        if prev > &upper {
            return fail(format!("mu_{} = {} > {} (upper bound at e={e})", e - 1, prev, upper));
        }
    }
    Ok(RoyReport { holds: true, violated: None })
}

/// Index `k + g(A,e) − g(A_J,e)` at which a sub-sum `A_J` (`|J| = k + g`) is read.
pub fn direct_sum_index(k: usize, g: usize, e: usize, n: usize) -> usize {
    k + g - g_func(k + g, e, n)
}

/// Maximum over `J ⊂ {1..d}` with `|J| = k + g` of the table entry for `J` (1-based,
/// increasing). Also runs the one-element-removal recursion and requires agreement.
pub fn direct_sum_combine(table: &BTreeMap<Vec<usize>, ExponentValue>, d: usize, k: usize, g: usize) -> Result<ExponentValue, ExpError> {
    let size = k + g;
    if size == 0 || size > d {
        return Err(ExpError::Domain(format!("k+g={size} outside 1..={d}")));
    }
    let mut direct: Option<ExponentValue> = None;
    for j in increasing_tuples(d, size) {
        let v = table.get(&j).ok_or_else(|| ExpError::MissingEntry(format!("{j:?}")))?;
        if direct.as_ref().map_or(true, |b| v > b) {
            direct = Some(v.clone());
        }
    }
    let direct = direct.unwrap();
    let recursive = direct_sum_recursive(table, d, size)?;
    if recursive != direct {
        return Err(ExpError::Inconsistent(format!("direct {direct} vs recursive {recursive}")));
    }
    Ok(direct)
}

/// `μ(A_J) = max_{j∈J} μ(A_{J∖j})` from `J = {1..d}` down to subsets of size `size`.
pub fn direct_sum_recursive(table: &BTreeMap<Vec<usize>, ExponentValue>, d: usize, size: usize) -> Result<ExponentValue, ExpError> {
    fn rec(
        j: &[usize],
        size: usize,
        table: &BTreeMap<Vec<usize>, ExponentValue>,
        memo: &mut HashMap<Vec<usize>, ExponentValue>,
    ) -> Result<ExponentValue, ExpError> {
        if j.len() == size {
            return table.get(j).cloned().ok_or_else(|| ExpError::MissingEntry(format!("{j:?}")));
        }
        if let Some(v) = memo.get(j) {
            return Ok(v.clone());
        }
        let mut best: Option<ExponentValue> = None;
        for skip in 0..j.len() {
            let sub: Vec<usize> = j.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &x)| x).collect();
            let v = rec(&sub, size, table, memo)?;
            if best.as_ref().map_or(true, |b| &v > b) {
                best = Some(v);
            }
        }
        let best = best.unwrap();
        memo.insert(j.to_vec(), best.clone());
        Ok(best)
    }
    if size == 0 || size > d {
        return Err(ExpError::Domain(format!("subset size {size} outside 1..={d}")));
    }
    let full: Vec<usize> = (1..=d).collect();
    rec(&full, size, table, &mut HashMap::new())
}
