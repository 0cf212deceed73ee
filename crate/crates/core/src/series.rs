//! Truncated multivariate formal series with exact coefficients.
//!
//! A [`SeriesContext`] fixes an ordered set of variables, each with an
//! exponent window `[min, max]`. Ordinary power-series variables have
//! `min = 0`; a designated Laurent variable may carry a bounded negative
//! floor. Exponents above `max` are truncated away (that is the whole point
//! of the ring); exponents below `min` are a hard error, never a silent
//! clamp — the floor is a budget the caller sized for the computation.
//!
//! Coefficients are generic over [`Scalar`]; the crate instantiates
//! everything at `BigRational` (see [`crate::Series`]), keeping all
//! arithmetic exact.
//!
//! Truncation-exactness contract: a value produced here stores correct
//! coefficients on `[true valuation, max - debt]`, where `debt` counts how
//! many units of negative valuation were consumed by inversions along the
//! way. Formula evaluators work in an internal window with two spare top
//! exponents and restrict to the user window at the end.

use crate::error::SeriesError;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Div, Neg, Sub};
use std::sync::Arc;

/// Coefficient requirements: an exact field with cloneable elements.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Neg<Output = Self>
    + Sub<Output = Self>
    + Div<Output = Self>
{
}

impl<T> Scalar for T where
    T: Clone
        + PartialEq
        + fmt::Debug
        + fmt::Display
        + Zero
        + One
        + Neg<Output = Self>
        + Sub<Output = Self>
        + Div<Output = Self>
{
}

/// One variable of a context: name and exponent window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarSpec {
    pub name: String,
    pub min: i64,
    pub max: i64,
}

/// An ordered set of variables with per-variable exponent windows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesContext {
    vars: Vec<VarSpec>,
}

impl SeriesContext {
    /// Plain power-series context: every variable gets window `[0, cap]`.
    pub fn new(vars: &[(&str, i64)]) -> Arc<Self> {
        Self::build(
            &vars
                .iter()
                .map(|&(name, cap)| (name, 0, cap))
                .collect::<Vec<_>>(),
        )
    }

    /// General context with explicit `(name, min, max)` windows.
    ///
    /// Panics if a window violates `min <= 0 <= max` or a name repeats;
    /// contexts are built from static evaluation plans, so this is a
    /// programming error rather than a runtime condition.
    pub fn build(vars: &[(&str, i64, i64)]) -> Arc<Self> {
        let mut seen = std::collections::BTreeSet::new();
        for &(name, min, max) in vars {
            assert!(min <= 0 && max >= 0, "window for {name} must contain 0");
            assert!(seen.insert(name), "variable {name} repeated");
        }
        Arc::new(SeriesContext {
            vars: vars
                .iter()
                .map(|&(name, min, max)| VarSpec { name: name.to_string(), min, max })
                .collect(),
        })
    }

    pub fn vars(&self) -> &[VarSpec] {
        &self.vars
    }

    pub fn index_of(&self, name: &str) -> Result<usize, SeriesError> {
        self.vars
            .iter()
            .position(|v| v.name == name)
            .ok_or_else(|| SeriesError::UnknownVariable(name.to_string()))
    }

    pub fn cap(&self, name: &str) -> Result<i64, SeriesError> {
        Ok(self.vars[self.index_of(name)?].max)
    }

    /// Same variables in the same order (windows may differ).
    fn same_vars(&self, other: &Self) -> bool {
        self.vars.len() == other.vars.len()
            && self
                .vars
                .iter()
                .zip(&other.vars)
                .all(|(a, b)| a.name == b.name)
    }
}

/// A truncated multivariate series: exponent vector -> nonzero coefficient.
#[derive(Clone, PartialEq, Eq)]
pub struct TruncatedSeries<C: Scalar> {
    ctx: Arc<SeriesContext>,
    terms: BTreeMap<Vec<i64>, C>,
}

impl<C: Scalar> TruncatedSeries<C> {
    pub fn zero(ctx: &Arc<SeriesContext>) -> Self {
        TruncatedSeries { ctx: ctx.clone(), terms: BTreeMap::new() }
    }

    pub fn one(ctx: &Arc<SeriesContext>) -> Self {
        Self::constant(ctx, C::one())
    }

    pub fn constant(ctx: &Arc<SeriesContext>, c: C) -> Self {
        let mut s = Self::zero(ctx);
        if !c.is_zero() {
            s.terms.insert(vec![0; ctx.vars.len()], c);
        }
        s
    }

    /// The monomial `c * var^exp`.
    pub fn monomial(
        ctx: &Arc<SeriesContext>,
        var: &str,
        exp: i64,
        c: C,
    ) -> Result<Self, SeriesError> {
        let idx = ctx.index_of(var)?;
        let spec = &ctx.vars[idx];
        if exp < spec.min {
            return Err(SeriesError::LaurentBudget {
                var: var.to_string(),
                exponent: exp,
                floor: spec.min,
            });
        }
        let mut s = Self::zero(ctx);
        if !c.is_zero() && exp <= spec.max {
            let mut e = vec![0; ctx.vars.len()];
            e[idx] = exp;
            s.terms.insert(e, c);
        }
        Ok(s)
    }

    /// The variable itself, `var^1`.
    pub fn var(ctx: &Arc<SeriesContext>, var: &str) -> Result<Self, SeriesError> {
        Self::monomial(ctx, var, 1, C::one())
    }

    /// The polynomial `coeffs[0] + coeffs[1] var + ...`.
    pub fn poly_in(
        ctx: &Arc<SeriesContext>,
        var: &str,
        coeffs: &[C],
    ) -> Result<Self, SeriesError> {
        let mut s = Self::zero(ctx);
        for (i, c) in coeffs.iter().enumerate() {
            s = s.add(&Self::monomial(ctx, var, i as i64, c.clone())?)?;
        }
        Ok(s)
    }

    pub fn context(&self) -> &Arc<SeriesContext> {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[i64], &C)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of the monomial with the given named exponents
    /// (unnamed variables default to exponent 0).
    pub fn coeff(&self, exps: &[(&str, i64)]) -> Result<C, SeriesError> {
        let mut e = vec![0; self.ctx.vars.len()];
        for &(name, exp) in exps {
            e[self.ctx.index_of(name)?] = exp;
        }
        Ok(self.terms.get(&e).cloned().unwrap_or_else(C::zero))
    }

    fn check_same_ctx(&self, other: &Self) -> Result<(), SeriesError> {
        if Arc::ptr_eq(&self.ctx, &other.ctx) || self.ctx == other.ctx {
            Ok(())
        } else {
            Err(SeriesError::ContextMismatch)
        }
    }

    fn insert_checked(
        terms: &mut BTreeMap<Vec<i64>, C>,
        ctx: &SeriesContext,
        e: Vec<i64>,
        c: C,
    ) -> Result<(), SeriesError> {
        for (i, spec) in ctx.vars.iter().enumerate() {
            if e[i] < spec.min {
                return Err(SeriesError::LaurentBudget {
                    var: spec.name.clone(),
                    exponent: e[i],
                    floor: spec.min,
                });
            }
            if e[i] > spec.max {
                return Ok(()); // truncated away
            }
        }
        if c.is_zero() {
            return Ok(());
        }
        match terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = {
                    let cur: &C = o.get();
                    let mut s = cur.clone();
                    s = s + c;
                    s
                };
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_same_ctx(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            Self::insert_checked(&mut out.terms, &out.ctx, e.clone(), c.clone())?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.add(&-other.clone())
    }

    pub fn scale(&self, k: &C) -> Self {
        let mut out = Self::zero(&self.ctx);
        if k.is_zero() {
            return out;
        }
        for (e, c) in &self.terms {
            let prod = c.clone() * k.clone();
            if !prod.is_zero() {
                out.terms.insert(e.clone(), prod);
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_same_ctx(other)?;
        let mut out = Self::zero(&self.ctx);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<i64> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                let c = ca.clone() * cb.clone();
                Self::insert_checked(&mut out.terms, &out.ctx, e, c)?;
            }
        }
        Ok(out)
    }

    pub fn pow(&self, mut k: u32) -> Result<Self, SeriesError> {
        let mut base = self.clone();
        let mut acc = Self::one(&self.ctx);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Shifts every exponent by `delta` (one entry per context variable).
    /// Exponents climbing above a cap are truncated; falling below a floor
    /// is an error.
    pub fn shift(&self, delta: &[i64]) -> Result<Self, SeriesError> {
        assert_eq!(delta.len(), self.ctx.vars.len());
        let mut out = Self::zero(&self.ctx);
        for (e, c) in &self.terms {
            let shifted: Vec<i64> = e.iter().zip(delta).map(|(a, d)| a + d).collect();
            Self::insert_checked(&mut out.terms, &out.ctx, shifted, c.clone())?;
        }
        Ok(out)
    }

    /// Multiplies by the monomial `var^exp` (exp may be negative).
    pub fn mul_var_pow(&self, var: &str, exp: i64) -> Result<Self, SeriesError> {
        let idx = self.ctx.index_of(var)?;
        let mut delta = vec![0; self.ctx.vars.len()];
        delta[idx] = exp;
        self.shift(&delta)
    }

    /// Multiplicative inverse up to truncation.
    ///
    /// Requires the support to have a componentwise-minimal monomial m0
    /// (typically the constant term, or a pure power of the Laurent
    /// variable). The result carries valuation -m0, which must fit the
    /// context floors, and its stored coefficients are exact on a window
    /// shortened at the top by the positive part of m0.
    pub fn invert(&self) -> Result<Self, SeriesError> {
        if self.terms.is_empty() {
            return Err(SeriesError::NotInvertible("zero series".into()));
        }
        let nvars = self.ctx.vars.len();
        let mut m0 = vec![i64::MAX; nvars];
        for e in self.terms.keys() {
            for i in 0..nvars {
                m0[i] = m0[i].min(e[i]);
            }
        }
        let c0 = match self.terms.get(&m0) {
            Some(c) => c.clone(),
            None => {
                return Err(SeriesError::NotInvertible(
                    "support has no componentwise-minimal monomial".into(),
                ))
            }
        };
        // N = self / (c0 * m0) - 1: all exponents >= 0, no constant term.
        let mut n_series = Self::zero(&self.ctx);
        for (e, c) in &self.terms {
            let shifted: Vec<i64> = e.iter().zip(&m0).map(|(a, b)| a - b).collect();
            if shifted.iter().all(|&x| x == 0) {
                continue;
            }
            Self::insert_checked(
                &mut n_series.terms,
                &self.ctx,
                shifted,
                c.clone() / c0.clone(),
            )?;
        }
        // Neumann series sum (-N)^k; N has positive total degree, so the
        // loop terminates within the total degree budget of the window.
        let budget: i64 = self.ctx.vars.iter().map(|v| v.max - v.min).sum::<i64>() + 1;
        let minus_n = n_series.neg();
        let mut acc = Self::one(&self.ctx);
        let mut p = Self::one(&self.ctx);
        for _ in 0..budget {
            p = p.mul(&minus_n)?;
            if p.is_zero() {
                break;
            }
            acc = acc.add(&p)?;
        }
        debug_assert!(p.is_zero(), "Neumann iteration failed to terminate");
        let neg_m0: Vec<i64> = m0.iter().map(|&x| -x).collect();
        let inv_c0 = C::one() / c0;
        Ok(acc.shift(&neg_m0)?.scale(&inv_c0))
    }

    /// Divides by `other`, i.e. `self * other.invert()`.
    pub fn div(&self, other: &Self) -> Result<Self, SeriesError> {
        self.mul(&other.invert()?)
    }

    /// Substitutes an exact scalar for one variable; the result lives in the
    /// context without that variable. Negative exponents require the value
    /// to be nonzero (otherwise this is a pole).
    pub fn specialize(&self, var: &str, value: &C) -> Result<Self, SeriesError> {
        let idx = self.ctx.index_of(var)?;
        let sub_vars: Vec<(&str, i64, i64)> = self
            .ctx
            .vars
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != idx)
            .map(|(_, v)| (v.name.as_str(), v.min, v.max))
            .collect();
        let new_ctx = SeriesContext::build(&sub_vars);
        let mut out = Self::zero(&new_ctx);
        for (e, c) in &self.terms {
            let p = e[idx];
            let factor = scalar_pow(value, p).ok_or_else(|| {
                SeriesError::Pole(format!("{var} = 0 raised to negative power {p}"))
            })?;
            let mut reduced = Vec::with_capacity(e.len() - 1);
            for (i, &x) in e.iter().enumerate() {
                if i != idx {
                    reduced.push(x);
                }
            }
            Self::insert_checked(&mut out.terms, &out.ctx, reduced, c.clone() * factor)?;
        }
        Ok(out)
    }

    /// Re-truncates into a context with the same variables but different
    /// windows. Terms above a new cap are dropped; a term below a new floor
    /// is an error (mass would be lost silently otherwise).
    pub fn restrict(&self, new_ctx: &Arc<SeriesContext>) -> Result<Self, SeriesError> {
        if !self.ctx.same_vars(new_ctx) {
            return Err(SeriesError::ContextMismatch);
        }
        let mut out = Self::zero(new_ctx);
        for (e, c) in &self.terms {
            Self::insert_checked(&mut out.terms, new_ctx, e.clone(), c.clone())?;
        }
        Ok(out)
    }

    /// Smallest exponent of `var` over the support (None for the zero series).
    pub fn min_exponent(&self, var: &str) -> Result<Option<i64>, SeriesError> {
        let idx = self.ctx.index_of(var)?;
        Ok(self.terms.keys().map(|e| e[idx]).min())
    }

    /// Smallest total degree over the given variables (None for zero).
    pub fn min_total_exponent(&self, vars: &[&str]) -> Result<Option<i64>, SeriesError> {
        let idxs: Vec<usize> = vars
            .iter()
            .map(|v| self.ctx.index_of(v))
            .collect::<Result<_, _>>()?;
        Ok(self
            .terms
            .keys()
            .map(|e| idxs.iter().map(|&i| e[i]).sum::<i64>())
            .min())
    }

    /// Renders one exponent vector as `t^2*u^-1` (constant -> `1`).
    pub fn monomial_string(&self, exps: &[i64]) -> String {
        let mut parts = Vec::new();
        for (spec, &e) in self.ctx.vars.iter().zip(exps) {
            match e {
                0 => {}
                1 => parts.push(spec.name.clone()),
                _ => parts.push(format!("{}^{}", spec.name, e)),
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }

    /// First monomial (in context order) where the two series differ,
    /// together with both coefficients.
    pub fn first_difference(&self, other: &Self) -> Option<(Vec<i64>, C, C)> {
        let mut keys: std::collections::BTreeSet<&Vec<i64>> = self.terms.keys().collect();
        keys.extend(other.terms.keys());
        for e in keys {
            let a = self.terms.get(e).cloned().unwrap_or_else(C::zero);
            let b = other.terms.get(e).cloned().unwrap_or_else(C::zero);
            if a != b {
                return Some((e.clone(), a, b));
            }
        }
        None
    }
}

/// value^p with p possibly negative; None when value = 0 and p < 0.
fn scalar_pow<C: Scalar>(value: &C, p: i64) -> Option<C> {
    if p == 0 {
        return Some(C::one());
    }
    if value.is_zero() && p < 0 {
        return None;
    }
    let base = if p > 0 {
        value.clone()
    } else {
        C::one() / value.clone()
    };
    let mut acc = C::one();
    for _ in 0..p.unsigned_abs() {
        acc = acc * base.clone();
    }
    Some(acc)
}

impl<C: Scalar> Neg for TruncatedSeries<C> {
    type Output = Self;

    fn neg(mut self) -> Self {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }
}

impl<C: Scalar> fmt::Display for TruncatedSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({})*{}", c, self.monomial_string(e))?;
        }
        Ok(())
    }
}

impl<C: Scalar> fmt::Debug for TruncatedSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Expands `num(u) / den(u)` as a series in the reciprocal variable
/// `ubar = 1/u`. `num` and `den` are polynomial coefficient lists in `u`
/// (constant first); the target context must contain `ubar_name`.
///
/// Substituting u = 1/ubar and clearing ubar^deg from both sides turns the
/// quotient into an ordinary truncated-series division in ubar, whose
/// valuation bookkeeping the engine already handles.
pub fn reciprocal_expand<C: Scalar>(
    ctx: &Arc<SeriesContext>,
    ubar_name: &str,
    num: &[C],
    den: &[C],
) -> Result<TruncatedSeries<C>, SeriesError> {
    let trim = |coeffs: &[C]| -> Vec<C> {
        let mut v = coeffs.to_vec();
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
        v
    };
    let num = trim(num);
    let den = trim(den);
    if den.is_empty() {
        return Err(SeriesError::NotInvertible("zero denominator".into()));
    }
    if num.is_empty() {
        return Ok(TruncatedSeries::zero(ctx));
    }
    let d = num.len().max(den.len()) - 1;
    // u^{-d} * num(u) and u^{-d} * den(u), written in ubar.
    let lift = |coeffs: &[C]| -> Result<TruncatedSeries<C>, SeriesError> {
        let mut s = TruncatedSeries::zero(ctx);
        for (i, c) in coeffs.iter().enumerate() {
            s = s.add(&TruncatedSeries::monomial(
                ctx,
                ubar_name,
                (d - i) as i64,
                c.clone(),
            )?)?;
        }
        Ok(s)
    };
    lift(&num)?.div(&lift(&den)?)
}
