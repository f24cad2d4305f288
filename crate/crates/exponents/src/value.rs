use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::ExpError;

/// A Diophantine exponent: an exact rational or `+∞`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExponentValue {
    Finite(BigRational),
    Infinite,
}

impl ExponentValue {
    pub fn finite(r: BigRational) -> Self {
        ExponentValue::Finite(r)
    }

    pub fn from_int(n: i64) -> Self {
        ExponentValue::Finite(BigRational::from_integer(n.into()))
    }

    pub fn as_finite(&self) -> Option<&BigRational> {
        match self {
            ExponentValue::Finite(r) => Some(r),
            ExponentValue::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExponentValue::Infinite)
    }
}

impl PartialOrd for ExponentValue {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for ExponentValue {
    fn cmp(&self, o: &Self) -> Ordering {
        match (self, o) {
            (ExponentValue::Infinite, ExponentValue::Infinite) => Ordering::Equal,
            (ExponentValue::Infinite, _) => Ordering::Greater,
            (_, ExponentValue::Infinite) => Ordering::Less,
            (ExponentValue::Finite(a), ExponentValue::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for ExponentValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExponentValue::Finite(r) => write!(f, "{r}"),
            ExponentValue::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for ExponentValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

pub fn g_func(d: usize, e: usize, n: usize) -> usize {
    (d + e).saturating_sub(n)
}

pub fn f_func(e: usize, mk: usize) -> usize {
    e.saturating_sub(mk)
}

/// `v_q = ⌈e/k⌉` for `q ≤ u`, `⌊e/k⌋` after, where `e = kv + u`.
pub fn v_q(e: usize, k: usize) -> Result<Vec<usize>, ExpError> {
    if k == 0 || e < k {
        return Err(ExpError::Domain(format!("v_q needs 1 ≤ k ≤ e, got e={e}, k={k}")));
    }
    let (v, u) = (e / k, e % k);
    Ok((1..=k).map(|q| if q <= u { v + 1 } else { v }).collect())
}

/// Largest product of `v` consecutive entries of `row` (windows inside the row);
/// `1` for `v = 0`.
pub fn kmax(row: &[BigRational], v: usize) -> Result<BigRational, ExpError> {
    Ok(kmax_argmax(row, v, row.len().saturating_sub(v) + 1)?.0)
}

/// Maximum and first maximizing start over windows starting in `0..starts`, reading
/// `row` cyclically if a window runs past its end.
pub(crate) fn kmax_argmax(row: &[BigRational], v: usize, starts: usize) -> Result<(BigRational, usize), ExpError> {
    if v == 0 {
        return Ok((BigRational::one(), 0));
    }
    if v > row.len() || starts == 0 {
        return Err(ExpError::Domain(format!("window length {v} exceeds row length {}", row.len())));
    }
    let mut best: Option<(BigRational, usize)> = None;
    for l in 0..starts {
        let p: BigRational = (0..v).map(|s| row[(l + s) % row.len()].clone()).product();
        if best.as_ref().map_or(true, |(b, _)| &p > b) {
            best = Some((p, l));
        }
    }
    Ok(best.unwrap())
}

/// Map `(e, j) → μ` for one target.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExponentTable {
    pub entries: BTreeMap<(usize, usize), ExponentValue>,
}

impl ExponentTable {
    pub fn new() -> Self {
        ExponentTable::default()
    }

    pub fn insert(&mut self, e: usize, j: usize, v: ExponentValue) {
        self.entries.insert((e, j), v);
    }

    pub fn get(&self, e: usize, j: usize) -> Option<&ExponentValue> {
        self.entries.get(&(e, j))
    }

    /// Checks every key lies in `V_{d,n}`: `1 ≤ j ≤ min(d,e) − g(d,e,n)`.
    pub fn check_keys(&self, d: usize, n: usize) -> Result<(), ExpError> {
        for &(e, j) in self.entries.keys() {
            if e == 0 || e >= n || j == 0 || j + g_func(d, e, n) > d.min(e) {
                return Err(ExpError::Domain(format!("(e,j)=({e},{j}) outside V_(d={d},n={n})")));
            }
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["e", "j", "mu_num", "mu_den", "infinite_flag"]).unwrap();
        for (&(e, j), v) in &self.entries {
            let (num, den, inf) = match v {
                ExponentValue::Finite(r) => (r.numer().to_string(), r.denom().to_string(), "0"),
                ExponentValue::Infinite => (String::new(), String::new(), "1"),
            };
            w.write_record([e.to_string(), j.to_string(), num, den, inf.to_string()]).unwrap();
        }
        String::from_utf8(w.into_inner().unwrap()).unwrap()
    }
}

impl Serialize for ExponentTable {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(serde::Serialize)]
        struct Row {
            e: usize,
            j: usize,
            mu: String,
        }
        let rows: Vec<Row> = self.entries.iter().map(|(&(e, j), v)| Row { e, j, mu: v.to_string() }).collect();
        let mut st = s.serialize_struct("ExponentTable", 1)?;
        st.serialize_field("entries", &rows)?;
        st.end()
    }
}

pub(crate) fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}
