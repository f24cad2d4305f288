use std::cmp::Ordering;
use std::io::Write;

use certified::Interval;
use exactlin::RationalSubspace;
use num_bigint::BigInt;
use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::SearchError;

/// One scanned subspace with its certified `ψ_j` and score `−ln ψ_j / ln H`.
#[derive(Clone, Debug)]
pub struct ApproximationRecord {
    /// Rank in the sorted output, or the family index `N`.
    pub n_or_rank: usize,
    pub subspace: RationalSubspace,
    pub height_sq: BigInt,
    /// `None` when the angle could not be certified (see `flag`).
    pub psi: Option<Interval>,
    /// `None` when `H = 1` or `ψ` may vanish.
    pub score: Option<Interval>,
    pub on_frontier: bool,
    pub flag: Option<String>,
}

fn pair(i: &Option<Interval>) -> (String, String) {
    i.as_ref().map(|x| x.to_decimal_pair(12)).unwrap_or_default()
}

fn plucker_string(b: &RationalSubspace) -> String {
    b.plucker().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

impl ApproximationRecord {
    /// `log₁₀ H`, to six decimals.
    pub fn log10_height(&self) -> String {
        let prec = 96;
        match certified::ln_int(&self.height_sq, prec) {
            Ok(l) => format!("{:.6}", l.mid_f64_lossy() / 2.0 / std::f64::consts::LN_10),
            Err(_) => String::new(),
        }
    }
}

impl Serialize for ApproximationRecord {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let (plo, phi) = pair(&self.psi);
        let (slo, shi) = pair(&self.score);
        let mut st = s.serialize_struct("ApproximationRecord", 9)?;
        st.serialize_field("nOrRank", &self.n_or_rank)?;
        st.serialize_field("heightSq", &self.height_sq.to_string())?;
        st.serialize_field("plucker", &self.subspace.plucker().iter().map(|x| x.to_string()).collect::<Vec<_>>())?;
        st.serialize_field("psiLo", &plo)?;
        st.serialize_field("psiHi", &phi)?;
        st.serialize_field("scoreLo", &slo)?;
        st.serialize_field("scoreHi", &shi)?;
        st.serialize_field("onFrontier", &self.on_frontier)?;
        st.serialize_field("flag", &self.flag)?;
        st.end()
    }
}

fn score_cmp(a: &Option<Interval>, b: &Option<Interval>) -> Ordering {
    match (a, b) {
        (Some(x), Some(y)) => y.lo().cmp(x.lo()).then_with(|| y.hi().cmp(x.hi())),
        (Some(_), None) => Ordering::Less,
        (None, Some(_)) => Ordering::Greater,
        (None, None) => Ordering::Equal,
    }
}

/// Score descending (unscored last), then height ascending, then Plücker vector.
pub fn record_order(a: &ApproximationRecord, b: &ApproximationRecord) -> Ordering {
    score_cmp(&a.score, &b.score)
        .then_with(|| a.height_sq.cmp(&b.height_sq))
        .then_with(|| a.subspace.plucker().cmp(b.subspace.plucker()))
}

pub(crate) fn sort_and_rank(records: &mut [ApproximationRecord], rank: bool) {
    records.sort_by(record_order);
    if rank {
        for (i, r) in records.iter_mut().enumerate() {
            r.n_or_rank = i + 1;
        }
    }
}

/// Writes `N_or_rank, heightSq, log10_H, psi_lo, psi_hi, score_lo, score_hi, plucker`.
pub fn write_csv<W: Write>(records: &[ApproximationRecord], w: W) -> Result<(), SearchError> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["N_or_rank", "heightSq", "log10_H", "psi_lo", "psi_hi", "score_lo", "score_hi", "plucker"])?;
    for r in records {
        let (plo, phi) = pair(&r.psi);
        let (slo, shi) = pair(&r.score);
        out.write_record([
            r.n_or_rank.to_string(),
            r.height_sq.to_string(),
            r.log10_height(),
            plo,
            phi,
            slo,
            shi,
            plucker_string(&r.subspace),
        ])?;
    }
    out.flush()?;
    Ok(())
}
