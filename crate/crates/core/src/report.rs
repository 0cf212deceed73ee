//! Machine-readable check reports.
//!
//! One report per verification run. Rationals and counts serialize as exact
//! strings ("p/q", never floats); a failed check always carries a witness.

use crate::Coeff;
use serde::Serialize;
use std::time::Duration;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// First point of disagreement for a failed check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Witness {
    /// A truncated-series comparison differed at one monomial.
    Series {
        monomial: String,
        lhs_coeff: String,
        rhs_coeff: String,
    },
    /// A distribution comparison differed at one statistic tuple.
    Distribution {
        tuple: String,
        count_a: String,
        count_b: String,
    },
    /// A bijection audit failed (non-injectivity, uncovered target, or a
    /// wrong statistic change); `detail` carries the offending objects.
    Map { detail: String },
}

/// Outcome of one named check.
#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub id: String,
    /// Range of lengths n the check covered (enumeration checks), if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_range: Option<(usize, usize)>,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub elapsed_ms: u128,
}

impl CheckReport {
    pub fn pass(id: &str, elapsed: Duration) -> Self {
        CheckReport {
            id: id.to_string(),
            n_range: None,
            status: Status::Pass,
            witness: None,
            elapsed_ms: elapsed.as_millis(),
        }
    }

    pub fn fail(id: &str, witness: Witness, elapsed: Duration) -> Self {
        CheckReport {
            id: id.to_string(),
            n_range: None,
            status: Status::Fail,
            witness: Some(witness),
            elapsed_ms: elapsed.as_millis(),
        }
    }

    pub fn with_range(mut self, lo: usize, hi: usize) -> Self {
        self.n_range = Some((lo, hi));
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Exact string form of a rational, always "p" or "p/q".
pub fn coeff_string(c: &Coeff) -> String {
    c.to_string()
}
