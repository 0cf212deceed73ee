//! Exact verification laboratory for Euler-Stirling statistics.
//!
//! Everything here is exact-rational: permutation and inversion-sequence
//! statistics are counted by brute-force enumeration, closed-form generating
//! functions are expanded as truncated multivariate series over `BigRational`,
//! and every identity check is an equality of term maps — no floating point,
//! no tolerances.
//!
//! The crate is organized around five pieces:
//!
//! * [`perm`] / [`invseq`]: the combinatorial objects, their statistics and
//!   lexicographic enumerators;
//! * [`series`], [`qseries`], [`sum`]: a truncated multivariate power-series
//!   ring with a bounded Laurent window, q-Pochhammer products, a basic
//!   hypergeometric evaluator, and guarded truncation of infinite sums;
//! * [`formulas`]: one evaluator per generating-function identity, each
//!   compared against the enumeration-built left side under a declared
//!   grading plan;
//! * [`equidist`]: exact joint distributions, equidistribution checks, and
//!   the open-conjecture scanner;
//! * [`tbij`]: the explicit one-step extension maps on inversion sequences
//!   and their roundtrip verifier.

pub mod equidist;
pub mod error;
pub mod formulas;
pub mod invseq;
pub mod perm;
pub mod report;
pub mod rng;
pub mod series;
pub mod stat;
pub mod sum;
pub mod qseries;
pub mod tbij;

/// Coefficient field used throughout: arbitrary-precision rationals.
pub type Coeff = num_rational::BigRational;

/// Arbitrary-precision non-negative count (distribution entries).
pub type Count = num_bigint::BigUint;

/// The concrete series type used by all formula evaluators.
pub type Series = series::TruncatedSeries<Coeff>;

/// Default upper bound on enumeration length n (n! objects are generated).
pub const DEFAULT_ENUM_BOUND: usize = 10;

use num_bigint::BigInt;

/// Shorthand for building an exact rational p/q.
pub fn rat(p: i64, q: i64) -> Coeff {
    Coeff::new(BigInt::from(p), BigInt::from(q))
}

/// Shorthand for an exact integer as a rational.
pub fn int(p: i64) -> Coeff {
    Coeff::from(BigInt::from(p))
}
