//! Error types shared across the crate.

use std::fmt;

/// Errors from combinatorial constructors and enumerators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CombError {
    /// Input violates a structural invariant (not a permutation, entry out of
    /// range, empty object where one is not allowed, ...).
    Domain(String),
    /// Enumeration size exceeds the configured bound.
    Resource { n: usize, bound: usize },
    /// A map was applied outside its declared domain.
    Precondition(String),
}

impl fmt::Display for CombError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CombError::Domain(msg) => write!(f, "domain error: {msg}"),
            CombError::Resource { n, bound } => {
                write!(f, "resource error: n = {n} exceeds enumeration bound {bound}")
            }
            CombError::Precondition(msg) => write!(f, "precondition violation: {msg}"),
        }
    }
}

impl std::error::Error for CombError {}

/// Errors from the truncated-series engine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeriesError {
    /// Two operands live in different contexts.
    ContextMismatch,
    /// Unknown variable name for the context.
    UnknownVariable(String),
    /// A monomial would fall below a variable's negative-exponent floor.
    /// This is always an error, never a silent clamp.
    LaurentBudget { var: String, exponent: i64, floor: i64 },
    /// The series has no unit valuation monomial (e.g. it is zero, or its
    /// support has no componentwise-minimal element), so it cannot be
    /// inverted in the truncated ring.
    NotInvertible(String),
    /// A specialization hit a declared pole (division by zero).
    Pole(String),
    /// A summed term's valuation fell below its claimed bound; the identity
    /// check must abort rather than silently drop mass.
    ValuationViolation {
        term_index: u64,
        claimed: i64,
        found: i64,
        monomial: String,
    },
    /// A tail of terms failed the geometric-with-polynomial-coefficients
    /// structure test, so the tail cannot be resummed exactly.
    NotGeometric { order: usize, monomial: String },
    /// The geometric resummation ratio is not strictly inside the unit
    /// interval, so the analytic sum the check targets does not converge.
    DivergentRatio(String),
    /// A lower Pochhammer factor vanished identically.
    Degenerate(String),
}

impl fmt::Display for SeriesError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeriesError::ContextMismatch => write!(f, "series context mismatch"),
            SeriesError::UnknownVariable(v) => write!(f, "unknown series variable `{v}`"),
            SeriesError::LaurentBudget { var, exponent, floor } => write!(
                f,
                "Laurent budget exceeded: {var}^{exponent} is below the floor {var}^{floor}"
            ),
            SeriesError::NotInvertible(msg) => write!(f, "series not invertible: {msg}"),
            SeriesError::Pole(msg) => write!(f, "pole hit: {msg}"),
            SeriesError::ValuationViolation { term_index, claimed, found, monomial } => write!(
                f,
                "valuation assertion failed at term {term_index}: claimed >= {claimed}, \
                 found {found} (witness monomial {monomial})"
            ),
            SeriesError::NotGeometric { order, monomial } => write!(
                f,
                "tail is not geometric-times-polynomial at difference order {order} \
                 (witness monomial {monomial})"
            ),
            SeriesError::DivergentRatio(r) => {
                write!(f, "geometric resummation ratio {r} is not inside (-1, 1)")
            }
            SeriesError::Degenerate(msg) => write!(f, "degenerate series: {msg}"),
        }
    }
}

impl std::error::Error for SeriesError {}

/// Errors surfaced by formula verification drivers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckError {
    Comb(CombError),
    Series(SeriesError),
    /// No pole-free specialization point was found after bounded redraws.
    PoleExhaustion { formula: String, attempts: u32 },
    /// Malformed request (unknown id, incompatible arities, bad caps).
    Usage(String),
}

impl fmt::Display for CheckError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckError::Comb(e) => write!(f, "{e}"),
            CheckError::Series(e) => write!(f, "{e}"),
            CheckError::PoleExhaustion { formula, attempts } => {
                write!(f, "no pole-free point for `{formula}` after {attempts} redraws")
            }
            CheckError::Usage(msg) => write!(f, "usage error: {msg}"),
        }
    }
}

impl std::error::Error for CheckError {}

impl From<CombError> for CheckError {
    fn from(e: CombError) -> Self {
        CheckError::Comb(e)
    }
}

impl From<SeriesError> for CheckError {
    fn from(e: SeriesError) -> Self {
        CheckError::Series(e)
    }
}
