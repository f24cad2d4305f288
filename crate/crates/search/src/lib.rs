//! Brute-force oracle: enumerate rational subspaces of bounded height, measure their
//! angles to a target, keep the best approximations and estimate exponents from them.

mod enumerate;
mod estimate;
mod record;
mod scan;

pub use enumerate::{
    entry_bound_sq, enumerate_lines, enumerate_subspaces, primitive_vectors, Enumeration, Strategy, TUPLE_BUDGET,
};
pub use estimate::{exponent_estimate, least_squares_slope, may_satisfy, threshold_report, EstimateMode, ThresholdReport};
pub use record::{record_order, write_csv, ApproximationRecord};
pub use scan::{best_approx_scan, evaluate, float_sines_sq, mark_frontier, score_interval, ScanConfig, ScanResult, Target};

use certified::CertError;
use exactlin::ExactError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("dimension: {0}")]
    Dimension(String),
    #[error("strategy {strategy:?} does not apply to n = {n}, e = {e}")]
    Strategy { strategy: Strategy, n: usize, e: usize },
    #[error("bound: {0}")]
    Bound(String),
    #[error("worker pool: {0}")]
    Workers(String),
    #[error("need at least 2 records, got {0}")]
    TooFewRecords(usize),
    #[error("degenerate estimate: {0}")]
    Degenerate(String),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Cert(#[from] CertError),
}
