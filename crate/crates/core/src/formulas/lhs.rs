//! Enumeration-built left sides of the generating-function identities.
//!
//! Every identity's left side has the shape
//!
//! ```text
//! sum_n t^n sum_objects u^s1 x^s2 q^s3 v^s4 z^s5 / ((1-u)^(n+c) (1-x)^(n+c))
//! ```
//!
//! over S_n with the statistics (des, ides, lmin, rmax, lmax), or over I_n
//! with (asc, dist, max, rmin, zero) — the two paths must agree and the
//! second is the cross-check. Each of the five slots is independently
//! formal, formal-reciprocal (expanded in ubar = 1/u at u = infinity), or
//! specialized to an exact rational; divisors are configurable because one
//! identity divides by (1-u)^n only and another uses exponent n+1 with an
//! n = 0 term.

use crate::error::{CheckError, SeriesError};
use crate::invseq::inversion_sequences;
use crate::perm::permutations;
use crate::series::SeriesContext;
use crate::stat::Domain;
use crate::{Coeff, Series};
use num_traits::One;
use std::collections::BTreeMap;
use std::sync::Arc;

/// How one statistic slot enters the series.
#[derive(Debug, Clone)]
pub enum Mode {
    /// Ordinary formal variable with this name.
    Formal(&'static str),
    /// Expanded in the reciprocal variable of this name (u = 1/ubar).
    Reciprocal(&'static str),
    /// Exact rational specialization.
    Value(Coeff),
}

/// Which statistic quintuple feeds the five slots.
fn quintuple(domain: Domain, obj_stats: &ObjStats) -> [u32; 5] {
    match (domain, obj_stats) {
        (Domain::Permutations, ObjStats::Perm(s)) => [s.des, s.ides, s.lmin, s.rmax, s.lmax],
        (Domain::InversionSequences, ObjStats::Inv(s)) => {
            [s.asc, s.dist, s.max, s.rmin, s.zero]
        }
        _ => unreachable!("domain/stat mismatch"),
    }
}

enum ObjStats {
    Perm(crate::perm::PermStats),
    Inv(crate::invseq::InvStats),
}

/// Full plan for one left side.
#[derive(Debug, Clone)]
pub struct LhsPlan {
    pub domain: Domain,
    /// Modes for the five slots (u, x, q, v, z) in that order.
    pub modes: [Mode; 5],
    /// Divide by (1-u)^(n+offset)?
    pub u_divisor: bool,
    /// Divide by (1-x)^(n+offset)?
    pub x_divisor: bool,
    /// Divisor exponent surplus: 0 or 1.
    pub offset: u32,
    /// Include the length-0 term (all statistics zero)?
    pub include_empty: bool,
}

impl LhsPlan {
    /// The five-statistic family: divisors (1-u)^n (1-x)^n, n >= 1.
    pub fn g_family(domain: Domain, modes: [Mode; 5]) -> Self {
        LhsPlan { domain, modes, u_divisor: true, x_divisor: true, offset: 0, include_empty: false }
    }

    /// The Eulerian pair with exponents n+1 and the n = 0 term.
    pub fn eulerian_pair(domain: Domain, u: Mode, x: Mode) -> Self {
        LhsPlan {
            domain,
            modes: [u, x, Mode::Value(Coeff::one()), Mode::Value(Coeff::one()), Mode::Value(Coeff::one())],
            u_divisor: true,
            x_divisor: true,
            offset: 1,
            include_empty: true,
        }
    }

    /// The (des, lmax, lmin) family: divisor (1-u)^n only.
    pub fn u_only(domain: Domain, u: Mode, q: Mode, z: Mode) -> Self {
        LhsPlan {
            domain,
            modes: [u, Mode::Value(Coeff::one()), q, Mode::Value(Coeff::one()), z],
            u_divisor: true,
            x_divisor: false,
            offset: 0,
            include_empty: false,
        }
    }
}

/// Builds the left side by full enumeration up to n = n_max (lengths above
/// the comparison window contribute nothing there; callers working in a
/// padded internal window pass the user t-cap).
pub fn lhs_series(
    ctx: &Arc<SeriesContext>,
    plan: &LhsPlan,
    n_max: usize,
) -> Result<Series, CheckError> {
    let one = Series::one(ctx);
    let mut total = Series::zero(ctx);

    // Cached inverses for formal divisors.
    let mut inv_cache: BTreeMap<&'static str, Series> = BTreeMap::new();
    // 1/(1-u) for a formal slot; 1/(1-ubar) for a reciprocal one (its
    // ubar^(n+c) (-1)^(n+c) bookkeeping is applied per n).
    let mut cached_inv = |name: &'static str| -> Result<Series, SeriesError> {
        if let Some(s) = inv_cache.get(name) {
            return Ok(s.clone());
        }
        let v = Series::var(ctx, name)?;
        let s = one.sub(&v)?.invert()?;
        inv_cache.insert(name, s.clone());
        Ok(s)
    };

    let start_n = if plan.include_empty { 0 } else { 1 };
    for n in start_n..=n_max {
        // Exact counts of the statistic quintuple over the domain.
        let mut counts: BTreeMap<[u32; 5], u64> = BTreeMap::new();
        if n == 0 {
            counts.insert([0; 5], 1);
        } else {
            match plan.domain {
                Domain::Permutations => {
                    for p in permutations(n)? {
                        let s = ObjStats::Perm(p.stats()?);
                        *counts.entry(quintuple(plan.domain, &s)).or_default() += 1;
                    }
                }
                Domain::InversionSequences => {
                    for iv in inversion_sequences(n)? {
                        let s = ObjStats::Inv(iv.stats()?);
                        *counts.entry(quintuple(plan.domain, &s)).or_default() += 1;
                    }
                }
            }
        }

        let exp = n as u32 + plan.offset;
        let mut poly = Series::zero(ctx);
        for (tuple, count) in &counts {
            let mut coeff = Coeff::from_integer((*count).into());
            let mut mono = Series::constant(ctx, Coeff::one());
            for (slot, &stat) in tuple.iter().enumerate() {
                match &plan.modes[slot] {
                    Mode::Formal(name) => {
                        mono = mono.mul(&Series::monomial(ctx, name, stat as i64, Coeff::one())?)?;
                    }
                    Mode::Reciprocal(name) => {
                        // u^stat alone contributes ubar^{-stat}; combined
                        // with the divisor below this stays non-negative.
                        debug_assert!(
                            (slot == 0 && plan.u_divisor) || (slot == 1 && plan.x_divisor),
                            "reciprocal slot needs its divisor"
                        );
                        mono = mono.mul(&Series::monomial(
                            ctx,
                            name,
                            exp as i64 - stat as i64,
                            Coeff::one(),
                        )?)?;
                    }
                    Mode::Value(v) => {
                        coeff *= pow_rational(v, stat);
                    }
                }
            }
            poly = poly.add(&mono.scale(&coeff))?;
        }

        // Divisors and the t^n weight.
        let mut term = poly.mul(&Series::monomial(ctx, "t", n as i64, Coeff::one())?)?;
        for slot in [0usize, 1] {
            let active = (slot == 0 && plan.u_divisor) || (slot == 1 && plan.x_divisor);
            if !active {
                continue;
            }
            match &plan.modes[slot] {
                Mode::Formal(name) => {
                    term = term.mul(&cached_inv(name)?.pow(exp)?)?;
                }
                Mode::Reciprocal(name) => {
                    // u^d (1-u)^{-(n+c)} = ubar^{n+c-d} (-1)^{n+c} (1-ubar)^{-(n+c)};
                    // the ubar^{n+c-d} part was emitted with the monomial.
                    let sign = if exp.is_multiple_of(2) { Coeff::one() } else { -Coeff::one() };
                    term = term.mul(&cached_inv(name)?.pow(exp)?)?.scale(&sign);
                }
                Mode::Value(v) => {
                    let denom = Coeff::one() - v.clone();
                    if num_traits::Zero::is_zero(&denom) {
                        return Err(CheckError::Series(SeriesError::Pole(
                            "divisor (1-u) vanishes at u = 1".into(),
                        )));
                    }
                    let inv = Coeff::one() / denom;
                    term = term.scale(&pow_rational(&inv, exp));
                }
            }
        }
        total = total.add(&term)?;
    }
    Ok(total)
}

fn pow_rational(v: &Coeff, e: u32) -> Coeff {
    let mut acc = Coeff::one();
    for _ in 0..e {
        acc *= v.clone();
    }
    acc
}
