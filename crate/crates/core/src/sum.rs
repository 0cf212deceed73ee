//! Guarded truncation of infinite sums.
//!
//! Two mechanisms cover every infinite sum in the formula evaluators:
//!
//! * [`bounded_sum`]: for sums whose n-th term provably escapes the window —
//!   the caller declares a non-decreasing valuation bound in a grading
//!   variable (or a total degree over several), the sum stops once the bound
//!   exceeds the cap, and every summed term is *asserted* to respect its
//!   claimed bound. A violation aborts the identity check with a witness.
//!
//! * [`geometric_tail_sum`]: for sums whose terms do not escape the window
//!   but have the shape term_k = rho^k * (polynomial in k), coefficientwise.
//!   Such tails are resummed exactly with finite differences:
//!   sum_k rho^k binom(k, m) = rho^m / (1-rho)^{m+1}. The polynomial
//!   structure is itself verified on a slack of extra samples, and the
//!   ratio must satisfy |rho| < 1 so that the resummed value is the limit
//!   of the convergent series being checked.

use crate::error::SeriesError;
use crate::series::{Scalar, SeriesContext, TruncatedSeries};
use crate::Coeff;
use num_traits::{One, Signed, Zero};
use std::sync::Arc;

/// What the valuation bound of [`bounded_sum`] is measured against.
#[derive(Debug, Clone)]
pub enum Grading {
    /// Exponent of a single variable.
    Var(String),
    /// Total degree over a set of variables.
    Total(Vec<String>),
}

impl Grading {
    pub fn var(name: &str) -> Self {
        Grading::Var(name.to_string())
    }

    pub fn total(names: &[&str]) -> Self {
        Grading::Total(names.iter().map(|s| s.to_string()).collect())
    }

    fn cap(&self, ctx: &SeriesContext) -> Result<i64, SeriesError> {
        match self {
            Grading::Var(v) => ctx.cap(v),
            Grading::Total(vs) => {
                let mut sum = 0;
                for v in vs {
                    sum += ctx.cap(v)?;
                }
                Ok(sum)
            }
        }
    }

    fn valuation<C: Scalar>(
        &self,
        s: &TruncatedSeries<C>,
    ) -> Result<Option<i64>, SeriesError> {
        match self {
            Grading::Var(v) => s.min_exponent(v),
            Grading::Total(vs) => {
                let names: Vec<&str> = vs.iter().map(|s| s.as_str()).collect();
                s.min_total_exponent(&names)
            }
        }
    }
}

/// Hard ceiling on summation indices; reaching it means the valuation bound
/// is not actually unbounded.
const MAX_TERMS: u64 = 100_000;

/// Sums `term(n)` for n = 1, 2, ... while `bound(n) <= cap(grading)`,
/// asserting for every summed term that its actual valuation in the grading
/// is at least `bound(n)`.
pub fn bounded_sum<C, F, B>(
    ctx: &Arc<SeriesContext>,
    grading: &Grading,
    mut term: F,
    bound: B,
) -> Result<TruncatedSeries<C>, SeriesError>
where
    C: Scalar,
    F: FnMut(u64) -> Result<TruncatedSeries<C>, SeriesError>,
    B: Fn(u64) -> i64,
{
    let cap = grading.cap(ctx)?;
    let mut sum = TruncatedSeries::zero(ctx);
    let mut n = 1u64;
    while bound(n) <= cap {
        if n > MAX_TERMS {
            return Err(SeriesError::Degenerate(format!(
                "valuation bound still below cap after {MAX_TERMS} terms"
            )));
        }
        let t = term(n)?;
        if let Some(v) = grading.valuation(&t)? {
            if v < bound(n) {
                let monomial = t
                    .terms()
                    .next()
                    .map(|(e, _)| t.monomial_string(e))
                    .unwrap_or_default();
                return Err(SeriesError::ValuationViolation {
                    term_index: n,
                    claimed: bound(n),
                    found: v,
                    monomial,
                });
            }
        }
        sum = sum.add(&t)?;
        n += 1;
    }
    Ok(sum)
}

/// Exactly resums `sum_{k >= 0} term(k)` when, coefficient by coefficient,
/// `term(k) = rho^k * P(k)` with `deg P <= max_degree`.
///
/// `slack` extra samples verify the structure: after `max_degree + 1`
/// finite differences of `term(k) / rho^k` the remaining rows must vanish
/// identically. Requires 0 < |rho| < 1 and rho != 1 so the closed form
/// `sum_k rho^k binom(k,m) = rho^m / (1-rho)^{m+1}` is the limit of the
/// convergent sum.
pub fn geometric_tail_sum<F>(
    ctx: &Arc<SeriesContext>,
    mut term: F,
    rho: &Coeff,
    max_degree: usize,
    slack: usize,
) -> Result<TruncatedSeries<Coeff>, SeriesError>
where
    F: FnMut(u64) -> Result<TruncatedSeries<Coeff>, SeriesError>,
{
    if rho.is_zero() || rho.abs() >= Coeff::one() {
        return Err(SeriesError::DivergentRatio(rho.to_string()));
    }
    let samples = max_degree + 1 + slack;
    // d_k = term(k) / rho^k
    let mut rows: Vec<TruncatedSeries<Coeff>> = Vec::with_capacity(samples);
    let mut rho_pow = Coeff::one();
    for k in 0..samples {
        let t = term(k as u64)?;
        let inv = Coeff::one() / rho_pow.clone();
        rows.push(t.scale(&inv));
        rho_pow *= rho.clone();
    }
    // Finite differences; record Delta^m d(0) for m <= max_degree, then
    // demand that all higher differences vanish on the slack window.
    let mut lead: Vec<TruncatedSeries<Coeff>> = Vec::with_capacity(max_degree + 1);
    let mut order = 0usize;
    loop {
        lead.push(rows[0].clone());
        if order == max_degree {
            break;
        }
        for i in 0..rows.len() - 1 {
            rows[i] = rows[i + 1].sub(&rows[i])?;
        }
        rows.pop();
        order += 1;
    }
    // rows now holds Delta^{max_degree} d at offsets 0..; difference once
    // more and check the residue is identically zero.
    for i in 0..rows.len() - 1 {
        let diff = rows[i + 1].sub(&rows[i])?;
        if !diff.is_zero() {
            let monomial = diff
                .terms()
                .next()
                .map(|(e, _)| diff.monomial_string(e))
                .unwrap_or_default();
            return Err(SeriesError::NotGeometric {
                order: max_degree + 1 + i,
                monomial,
            });
        }
    }
    // sum = sum_{m} Delta^m d(0) * rho^m / (1-rho)^{m+1}
    let one_minus_rho = Coeff::one() - rho.clone();
    let mut sum = TruncatedSeries::zero(ctx);
    let mut factor = Coeff::one() / one_minus_rho.clone(); // rho^m/(1-rho)^{m+1}
    for d in lead {
        sum = sum.add(&d.scale(&factor))?;
        factor = factor * rho.clone() / one_minus_rho.clone();
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{int, rat, Series};

    #[test]
    fn bounded_sum_of_powers() {
        // terms t^n, cap 3 -> 1-indexed sum t + t^2 + t^3
        let ctx = SeriesContext::new(&[("t", 3)]);
        let s = bounded_sum(
            &ctx,
            &Grading::var("t"),
            |n| Series::monomial(&ctx, "t", n as i64, int(1)),
            |n| n as i64,
        )
        .unwrap();
        assert_eq!(s, Series::poly_in(&ctx, "t", &[int(0), int(1), int(1), int(1)]).unwrap());
    }

    #[test]
    fn bounded_sum_detects_violation() {
        // claim valuation n but emit constant terms
        let ctx = SeriesContext::new(&[("t", 5)]);
        let err = bounded_sum(
            &ctx,
            &Grading::var("t"),
            |_| Ok(Series::one(&ctx)),
            |n| n as i64,
        )
        .unwrap_err();
        match err {
            SeriesError::ValuationViolation { term_index, claimed, found, .. } => {
                assert_eq!(term_index, 1);
                assert_eq!(claimed, 1);
                assert_eq!(found, 0);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn bounded_sum_total_grading() {
        // term n = (a*r)^n with bound 2n on total degree in (a, r).
        let ctx = SeriesContext::new(&[("a", 4), ("r", 4)]);
        let ar = Series::var(&ctx, "a")
            .unwrap()
            .mul(&Series::var(&ctx, "r").unwrap())
            .unwrap();
        let s = bounded_sum(
            &ctx,
            &Grading::total(&["a", "r"]),
            |n| ar.pow(n as u32),
            |n| 2 * n as i64,
        )
        .unwrap();
        assert_eq!(s.coeff(&[("a", 1), ("r", 1)]).unwrap(), int(1));
        assert_eq!(s.coeff(&[("a", 4), ("r", 4)]).unwrap(), int(1));
        assert_eq!(s.coeff(&[("a", 2), ("r", 1)]).unwrap(), int(0));
    }

    #[test]
    fn geometric_sum_scalar_oracle() {
        // sum (k^2 + 1) (1/2)^k = 8, via the classical closed forms
        // sum k^2 x^k = x(1+x)/(1-x)^3 and sum x^k = 1/(1-x) at x = 1/2.
        let ctx = SeriesContext::new(&[("t", 0)]);
        let s = geometric_tail_sum(
            &ctx,
            |k| {
                let mut pow = Coeff::one();
                for _ in 0..k {
                    pow *= rat(1, 2);
                }
                let v = int((k * k + 1) as i64) * pow;
                Ok(Series::constant(&ctx, v))
            },
            &rat(1, 2),
            2,
            4,
        )
        .unwrap();
        assert_eq!(s.coeff(&[]).unwrap(), int(8));
    }

    #[test]
    fn geometric_sum_series_valued() {
        // term_k = (1/3)^k * (1 + k t): sum = 3/2 + (3/4) t.
        let ctx = SeriesContext::new(&[("t", 1)]);
        let s = geometric_tail_sum(
            &ctx,
            |k| {
                let mut pow = Coeff::one();
                for _ in 0..k {
                    pow *= rat(1, 3);
                }
                Series::poly_in(&ctx, "t", &[int(1), int(k as i64)])
                    .map(|p| p.scale(&pow))
            },
            &rat(1, 3),
            1,
            4,
        )
        .unwrap();
        assert_eq!(s.coeff(&[]).unwrap(), rat(3, 2));
        assert_eq!(s.coeff(&[("t", 1)]).unwrap(), rat(3, 4));
    }

    #[test]
    fn geometric_sum_rejects_non_polynomial() {
        // term_k = (1/2)^k * 2^{k mod 2} is not rho^k * polynomial.
        let ctx = SeriesContext::new(&[("t", 0)]);
        let err = geometric_tail_sum(
            &ctx,
            |k| {
                let mut pow = Coeff::one();
                for _ in 0..k {
                    pow *= rat(1, 2);
                }
                if k % 2 == 1 {
                    pow *= int(2);
                }
                Ok(Series::constant(&ctx, pow))
            },
            &rat(1, 2),
            3,
            4,
        )
        .unwrap_err();
        assert!(matches!(err, SeriesError::NotGeometric { .. }));
    }

    #[test]
    fn geometric_sum_rejects_divergent_ratio() {
        let ctx = SeriesContext::new(&[("t", 0)]);
        let err = geometric_tail_sum(&ctx, |_| Ok(Series::one(&ctx)), &rat(3, 2), 1, 2)
            .unwrap_err();
        assert!(matches!(err, SeriesError::DivergentRatio(_)));
    }
}
