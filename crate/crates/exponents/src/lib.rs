//! Closed-form Diophantine exponents of the explicit constructions: window maxima,
//! block formulas, Roy's spectrum inequalities, direct-sum combination, and the
//! growth conditions the constructions need.

mod formulas;
mod hypotheses;
mod value;

pub use formulas::{
    block_index_report, direct_sum_combine, direct_sum_index, direct_sum_recursive, extend_row, mu_block_formula,
    mu_first_angle, mu_line_formula, roy_check, subset_max, BlockIndexReport, RoyReport,
};
pub use hypotheses::{
    cmp_c1_power, cmp_powers, gamma_from_beta, validate_beta_hypotheses, witness_ns, GammaFromBeta, HypothesisCheck,
    HypothesisReport, OThreshold,
};
pub use value::{f_func, g_func, kmax, v_q, ExponentTable, ExponentValue};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExpError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("missing table entry for {0}")]
    MissingEntry(String),
    #[error("comparison stayed ambiguous: {0}")]
    Ambiguous(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}
