//! Closed-form right sides of the identities, expanded as exact truncated
//! series under each formula's grading plan.
//!
//! Grading plans (the variable whose degree provably bounds which summands
//! can touch the window; `bounded_sum` re-asserts every claim at runtime):
//!
//! * the Eulerian-pair double sum: term (n, k) carries x^(n-1) u^(k-1)
//!   exactly — bigraded in (x, u);
//! * the (des, ides, rmax) forms: term n carries u^(n-1) exactly (direct
//!   form) or ubar^n exactly (reciprocal form);
//! * the quadruple forms: u-graded resp. ubar-graded, with a bounded
//!   Laurent debt in t from inverting (1-t)^i - 1 factors;
//! * the (des, lmax, lmin) form: term n carries u^n exactly;
//! * the hypergeometric transformation: with its `a` slot formal, term k
//!   vanishes to total (a, r)-order >= k;
//! * the Pochhammer-ratio series with a = 1/t: terms do not escape any
//!   window; coefficientwise they are rho^k * (polynomial in k), and
//!   [`geometric_tail_sum`] resums them exactly.

use crate::error::SeriesError;
use crate::series::SeriesContext;
use crate::sum::{bounded_sum, geometric_tail_sum, Grading};
use crate::{Coeff, Series};
use num_traits::One;
use std::sync::Arc;

fn cnst(ctx: &Arc<SeriesContext>, c: &Coeff) -> Series {
    Series::constant(ctx, c.clone())
}

/// 1 - t as a series.
fn r_poly(ctx: &Arc<SeriesContext>) -> Result<Series, SeriesError> {
    Series::poly_in(ctx, "t", &[Coeff::one(), -Coeff::one()])
}

/// The double sum  sum_{n,k >= 1} x^(n-1) u^(k-1) / (1-t)^(kn).
pub fn rhs_eulerian_pair(ctx: &Arc<SeriesContext>) -> Result<Series, SeriesError> {
    let inv_r = r_poly(ctx)?.invert()?;
    bounded_sum(
        ctx,
        &Grading::var("x"),
        |n| {
            let xpow = Series::monomial(ctx, "x", n as i64 - 1, Coeff::one())?;
            let inner = bounded_sum(
                ctx,
                &Grading::var("u"),
                |k| {
                    Series::monomial(ctx, "u", k as i64 - 1, Coeff::one())?
                        .mul(&inv_r.pow((n * k) as u32)?)
                },
                |k| k as i64 - 1,
            )?;
            xpow.mul(&inner)
        },
        |n| n as i64 - 1,
    )
}

/// The same function of (t, x, u) expanded at u = infinity with x
/// specialized: summing the k-geometric sum in closed form first gives
/// sum_n x^(n-1) * (-(sum_m (1-t)^(mn) ubar^(m+1))), and the remaining
/// n-tail is geometric in x with polynomial t-coefficients.
pub fn rhs_eulerian_pair_reciprocal(
    ctx: &Arc<SeriesContext>,
    x: &Coeff,
) -> Result<Series, SeriesError> {
    let r = r_poly(ctx)?;
    let ucap = ctx.cap("ubar")?;
    let tcap = ctx.cap("t")?;
    let max_degree = 2 * tcap.max(0) as usize + 4;
    geometric_tail_sum(
        ctx,
        |k| {
            // term for n = k+1: -x^(n-1) sum_{m>=0} (1-t)^(mn) ubar^(m+1)
            let n = (k + 1) as u32;
            let rn = r.pow(n)?;
            let mut xpow = Coeff::one();
            for _ in 0..k {
                xpow *= x.clone();
            }
            let mut term = Series::zero(ctx);
            let mut rmn = Series::one(ctx);
            for m in 0..ucap {
                term = term.add(
                    &Series::monomial(ctx, "ubar", m + 1, -Coeff::one())?.mul(&rmn)?,
                )?;
                rmn = rmn.mul(&rn)?;
            }
            Ok(term.scale(&xpow))
        },
        x,
        max_degree,
        4,
    )
}

/// Middle closed form of the Eulerian pair:
/// 1/((u-1)(x-1)) + sum_n t (1-t)^(n-1) (u-1)^{-1}
///                        / (u^n (1 - x(1-t)^(n-1)) (1 - x(1-t)^n)).
pub fn rhs_pair_middle(ctx: &Arc<SeriesContext>, x: &Coeff) -> Result<Series, SeriesError> {
    let r = r_poly(ctx)?;
    let one = Series::one(ctx);
    // 1/(u-1) = ubar + ubar^2 + ... (valuation exactly 1)
    let inv_um1 = Series::monomial(ctx, "ubar", 1, Coeff::one())?
        .mul(&one.sub(&Series::var(ctx, "ubar")?)?.invert()?)?;
    let const_part = inv_um1.scale(&(Coeff::one() / (x.clone() - Coeff::one())));
    let t = Series::var(ctx, "t")?;
    let sum = bounded_sum(
        ctx,
        &Grading::var("ubar"),
        |n| {
            let rn1 = r.pow(n as u32 - 1)?;
            let rn = r.pow(n as u32)?;
            let den1 = one.sub(&rn1.scale(x))?.invert()?;
            let den2 = one.sub(&rn.scale(x))?.invert()?;
            t.mul(&rn1)?
                .mul(&inv_um1)?
                .mul(&Series::monomial(ctx, "ubar", n as i64, Coeff::one())?)?
                .mul(&den1)?
                .mul(&den2)
        },
        |n| n as i64 + 1,
    )?;
    const_part.add(&sum)
}

/// Quadruple closed form for (des, ides, rmax, lmin): u-graded with
/// x, v, q exact rationals; r = 1-t.
pub fn rhs_quadruple_lmin(
    ctx: &Arc<SeriesContext>,
    x: &Coeff,
    v: &Coeff,
    q: &Coeff,
) -> Result<Series, SeriesError> {
    let r = r_poly(ctx)?;
    let one = Series::one(ctx);
    let t = Series::var(ctx, "t")?;
    let u = Series::var(ctx, "u")?;

    // shared product factor: u (x - r^i - xvt) ((1-qt) r^(i-1) - 1) / ((r^i - 1)(x - r^i))
    let factor = |i: u32| -> Result<Series, SeriesError> {
        let ri = r.pow(i)?;
        let rim1 = r.pow(i - 1)?;
        let num1 = cnst(ctx, x).sub(&ri)?.sub(&t.scale(&(x.clone() * v.clone())))?;
        let num2 = one.sub(&t.scale(q))?.mul(&rim1)?.sub(&one)?;
        let den1 = ri.sub(&one)?; // valuation 1: Laurent debt of one
        let den2 = cnst(ctx, x).sub(&ri)?;
        u.mul(&num1)?
            .mul(&num2)?
            .mul(&den1.invert()?)?
            .mul(&den2.invert()?)
    };

    let running = std::cell::RefCell::new((Series::one(ctx), 1u64));
    let product_up_to = |n: u64| -> Result<Series, SeriesError> {
        let mut state = running.borrow_mut();
        assert!(state.1 <= n, "terms must be visited in order");
        while state.1 < n {
            let f = factor(state.1 as u32)?;
            state.0 = state.0.mul(&f)?;
            state.1 += 1;
        }
        Ok(state.0.clone())
    };

    let s1 = {
        let running2 = std::cell::RefCell::new((Series::one(ctx), 1u64));
        bounded_sum(
            ctx,
            &Grading::var("u"),
            |n| {
                let mut state = running2.borrow_mut();
                while state.1 < n {
                    let f = factor(state.1 as u32)?;
                    state.0 = state.0.mul(&f)?;
                    state.1 += 1;
                }
                let rn1 = r.pow(n as u32 - 1)?;
                let rn = r.pow(n as u32)?;
                let num = cnst(ctx, &(q.clone() * x.clone() - Coeff::one()))
                    .add(&rn1.scale(&(Coeff::one() - q.clone())))?;
                let den = cnst(ctx, x).sub(&rn)?;
                num.mul(&den.invert()?)?.mul(&state.0)
            },
            |n| n as i64 - 1,
        )?
    };

    let s2 = bounded_sum(
        ctx,
        &Grading::var("u"),
        |n| {
            let prod = product_up_to(n)?;
            let rn1 = r.pow(n as u32 - 1)?;
            let rn = r.pow(n as u32)?;
            let num = rn1
                .scale(&(x.clone() - Coeff::one() - x.clone() * v.clone()))
                .add(&cnst(ctx, &(x.clone() * v.clone())))?;
            let den = rn.sub(&one)?;
            num.mul(&den.invert()?)?.mul(&prod)
        },
        |n| n as i64 - 1,
    )?;

    // correction = u t (q-1)/(x-1) * s2; its u-valuation is at least one,
    // so 1 - correction inverts as a geometric series in u.
    let corr = s2
        .mul(&u)?
        .mul(&t)?
        .scale(&((q.clone() - Coeff::one()) / (x.clone() - Coeff::one())));
    let prefix = t
        .scale(v)
        .mul(&one.sub(&Series::constant(ctx, x.clone()))?.invert()?)?;
    prefix.mul(&s1)?.mul(&one.sub(&corr)?.invert()?)
}

/// Triple closed form, direct u-grading: term n carries u^(n-1).
/// The x slot is a series so the nested quadruple evaluator can pass
/// x (1-t)^(n-1); plain points pass a constant.
pub fn rhs_triple_direct(
    ctx: &Arc<SeriesContext>,
    x: &Series,
    v: &Coeff,
) -> Result<Series, SeriesError> {
    let r = r_poly(ctx)?;
    let t = Series::var(ctx, "t")?;
    let vt = t.scale(v);
    let running = std::cell::RefCell::new((Series::one(ctx), 1u64));
    bounded_sum(
        ctx,
        &Grading::var("u"),
        |n| {
            let mut state = running.borrow_mut();
            while state.1 < n {
                let i = state.1 as u32;
                let ri = r.pow(i)?;
                let num = x.sub(&ri)?.sub(&x.mul(&vt)?)?;
                let den = x.sub(&ri)?;
                let f = num.mul(&den.invert()?)?;
                state.0 = state.0.mul(&f)?;
                state.1 += 1;
            }
            let rn = r.pow(n as u32)?;
            let den = rn.sub(x)?;
            Series::monomial(ctx, "u", n as i64 - 1, Coeff::one())?
                .mul(&vt)?
                .mul(&den.invert()?)?
                .mul(&state.0)
        },
        |n| n as i64 - 1,
    )
}

/// Triple closed form, reciprocal grading: term n carries ubar^n.
pub fn rhs_triple_reciprocal(
    ctx: &Arc<SeriesContext>,
    x: &Series,
    v: &Coeff,
) -> Result<Series, SeriesError> {
    let r = r_poly(ctx)?;
    let one = Series::one(ctx);
    let t = Series::var(ctx, "t")?;
    let vt_minus_1 = t.scale(v).sub(&one)?;
    let running = std::cell::RefCell::new((Series::one(ctx), 0u64));
    bounded_sum(
        ctx,
        &Grading::var("ubar"),
        |n| {
            let mut state = running.borrow_mut();
            while state.1 < n {
                let i = state.1 as u32 + 1;
                let rim1 = r.pow(i - 1)?;
                let num = one.sub(&x.mul(&rim1)?)?;
                let den = x.mul(&rim1)?.mul(&vt_minus_1)?.add(&one)?;
                let f = num.mul(&den.invert()?)?;
                state.0 = state.0.mul(&f)?;
                state.1 += 1;
            }
            let rn1 = r.pow(n as u32 - 1)?;
            let den = x.mul(&rn1)?.sub(&one)?;
            Series::monomial(ctx, "ubar", n as i64, Coeff::one())?
                .mul(&t.scale(v))?
                .mul(&rn1)?
                .mul(&den.invert()?)?
                .mul(&state.0)
        },
        |n| n as i64,
    )
}

/// Quadruple closed form for (des, ides, rmax, lmax): ubar-graded; the
/// nested triple evaluation substitutes the series x (1-t)^(n-1) for x.
pub fn rhs_quadruple_lmax(
    ctx: &Arc<SeriesContext>,
    x: &Coeff,
    v: &Coeff,
    z: &Coeff,
) -> Result<Series, SeriesError> {
    let r = r_poly(ctx)?;
    let one = Series::one(ctx);
    let t = Series::var(ctx, "t")?;
    let ubar = Series::var(ctx, "ubar")?;

    // factor(i) = (t(1-z) r^(i-1) + r^i - 1) / (u (r^i - 1))
    let factor = |i: u32| -> Result<Series, SeriesError> {
        let rim1 = r.pow(i - 1)?;
        let ri = r.pow(i)?;
        let num = t.scale(&(Coeff::one() - z.clone())).mul(&rim1)?.add(&ri.sub(&one)?)?;
        let den = ri.sub(&one)?;
        num.mul(&den.invert()?)?.mul(&ubar)
    };

    let main_state = std::cell::RefCell::new((Series::one(ctx), 1u64));
    let main = bounded_sum(
        ctx,
        &Grading::var("ubar"),
        |n| {
            let mut state = main_state.borrow_mut();
            while state.1 < n {
                let f = factor(state.1 as u32)?;
                state.0 = state.0.mul(&f)?;
                state.1 += 1;
            }
            let rn1 = r.pow(n as u32 - 1)?;
            // T_n = r^(n-1) * triple(x r^(n-1), v); 1 + u x T_n needs one
            // ubar shift down, which T_n's valuation affords.
            let x_arg = rn1.scale(x);
            let t_n = rn1.mul(&rhs_triple_reciprocal(ctx, &x_arg, v)?)?;
            let uxt = t_n.mul_var_pow("ubar", -1)?.scale(x);
            let lead = one.add(&uxt)?;
            let den = rn1.scale(x).sub(&one)?;
            t.scale(&(z.clone() * v.clone()))
                .mul(&rn1)?
                .mul(&lead)?
                .mul(&ubar)?
                .mul(&den.invert()?)?
                .mul(&state.0)
        },
        |n| n as i64,
    )?;

    let corr_state = std::cell::RefCell::new((Series::one(ctx), 1u64));
    let corr = bounded_sum(
        ctx,
        &Grading::var("ubar"),
        |n| {
            let mut state = corr_state.borrow_mut();
            while state.1 < n {
                let f = factor(state.1 as u32)?;
                state.0 = state.0.mul(&f)?;
                state.1 += 1;
            }
            let rn1 = r.pow(n as u32 - 1)?;
            let rn = r.pow(n as u32)?;
            let den = rn.sub(&one)?;
            t.scale(&(z.clone() - Coeff::one()))
                .mul(&rn1)?
                .mul(&ubar)?
                .mul(&den.invert()?)?
                .mul(&state.0)
        },
        |n| n as i64,
    )?;

    main.mul(&one.sub(&corr)?.invert()?)
}

/// Closed form for (des, lmax, lmin): term n carries u^n (n from 0).
pub fn rhs_des_lmax_lmin(
    ctx: &Arc<SeriesContext>,
    q: &Coeff,
    z: &Coeff,
) -> Result<Series, SeriesError> {
    let one = Series::one(ctx);
    let t = Series::var(ctx, "t")?;
    bounded_sum(
        ctx,
        &Grading::var("u"),
        |idx| {
            let n = idx - 1; // the sum is indexed from 0
            // qzt u^n / (1 - (n-q+1) t) * prod_{i=0}^{n} (1-(i-q+1)t)/(1-(i+z)t)
            let lin = |c: Coeff| -> Result<Series, SeriesError> {
                one.sub(&t.scale(&c))
            };
            let mut term = Series::monomial(ctx, "u", n as i64, q.clone() * z.clone())?
                .mul(&t)?
                .mul(&lin(Coeff::from_integer((n as i64).into()) - q.clone() + Coeff::one())?
                    .invert()?)?;
            for i in 0..=n {
                let a = lin(Coeff::from_integer((i as i64).into()) - q.clone() + Coeff::one())?;
                let b = lin(Coeff::from_integer((i as i64).into()) + z.clone())?;
                term = term.mul(&a)?.mul(&b.invert()?)?;
            }
            Ok(term)
        },
        |idx| idx as i64 - 1,
    )
}

/// Parameters of the Pochhammer-ratio series shared by the symmetric-series
/// family: numerators A, B (and 1 - a t when present), denominators C, D
/// (and (1 - a t) u).
struct PochRatio {
    a: Series,
    b: Series,
    c: Series,
    d: Series,
}

/// Builds A, B, C, D for given (x, u, v, q):
/// A = (1-qt)(1-qv) / (x (1-vt)(1-v)),     B = (1-vt)(1-qv) / (x (1-qt)(1-q)),
/// C = (1-qv)^2 / (u x (1-v)(1-q)),        D = (1-t)^2 / x.
fn poch_ratio_params(
    ctx: &Arc<SeriesContext>,
    x: &Coeff,
    u: &Coeff,
    v: &Coeff,
    q: &Coeff,
) -> Result<PochRatio, SeriesError> {
    let one = Series::one(ctx);
    let t = Series::var(ctx, "t")?;
    let one_c = Coeff::one();
    let qv = one_c.clone() - q.clone() * v.clone();
    let omv = one_c.clone() - v.clone();
    let omq = one_c.clone() - q.clone();
    let qt = one.sub(&t.scale(q))?;
    let vt = one.sub(&t.scale(v))?;
    let a = qt
        .scale(&(qv.clone() / (x.clone() * omv.clone())))
        .mul(&vt.invert()?)?;
    let b = vt
        .scale(&(qv.clone() / (x.clone() * omq.clone())))
        .mul(&qt.invert()?)?;
    let c = cnst(ctx, &(qv.clone() * qv / (u.clone() * x.clone() * omv * omq)));
    let d = r_poly(ctx)?.pow(2)?.scale(&(one_c / x.clone()));
    Ok(PochRatio { a, b, c, d })
}

/// Five-parameter symmetric series (the formal-in-t member of the family):
///
/// qvt (1-t-x+xat) / ((1-t)(1-t-x))
///   * sum_k (A, B, 1-at; 1-t)_k / (C, D, (1-at)u; 1-t)_k (1-t)^k,
///
/// t-graded because every factor of (1-at; 1-t)_k vanishes at t = 0.
pub fn h_series_tilde(
    ctx: &Arc<SeriesContext>,
    x: &Coeff,
    u: &Coeff,
    v: &Coeff,
    q: &Coeff,
    a: &Coeff,
) -> Result<Series, SeriesError> {
    let p = poch_ratio_params(ctx, x, u, v, q)?;
    let one = Series::one(ctx);
    let t = Series::var(ctx, "t")?;
    let r = r_poly(ctx)?;
    let e_at = one.sub(&t.scale(a))?; // 1 - a t
    let e_at_u = e_at.scale(u);

    let state = std::cell::RefCell::new((Series::one(ctx), Series::one(ctx), 0u64));
    let sum = bounded_sum(
        ctx,
        &Grading::var("t"),
        |idx| {
            let k = idx - 1;
            let mut st = state.borrow_mut();
            while st.2 < k {
                let i = st.2 as u32;
                let w = r.pow(i)?;
                let num = one
                    .sub(&p.a.mul(&w)?)?
                    .mul(&one.sub(&p.b.mul(&w)?)?)?
                    .mul(&one.sub(&e_at.mul(&w)?)?)?;
                let den = one
                    .sub(&p.c.mul(&w)?)?
                    .mul(&one.sub(&p.d.mul(&w)?)?)?
                    .mul(&one.sub(&e_at_u.mul(&w)?)?)?;
                st.0 = st.0.mul(&num)?;
                st.1 = st.1.mul(&den.invert()?)?;
                st.2 += 1;
            }
            st.0.mul(&st.1)?.mul(&r.pow(k as u32)?)
        },
        |idx| idx as i64 - 1,
    )?;

    // prefactor qvt (1-t-x+xat) / ((1-t)(1-t-x))
    let num = one
        .sub(&t)?
        .sub(&cnst(ctx, x))?
        .add(&t.scale(&(x.clone() * a.clone())))?;
    let den = r.mul(&one.sub(&t)?.sub(&cnst(ctx, x))?)?;
    let pref = t.scale(&(q.clone() * v.clone())).mul(&num)?.mul(&den.invert()?)?;
    pref.mul(&sum)
}

/// Four-parameter member with a = 1/t: the series is no longer formal in t,
/// but coefficientwise its terms are rho^k * (polynomial in k), so the
/// exact geometric resummation applies. Requires |rho| < 1.
pub fn h_series_plain(
    ctx: &Arc<SeriesContext>,
    x: &Coeff,
    u: &Coeff,
    v: &Coeff,
    q: &Coeff,
) -> Result<Series, SeriesError> {
    let p = poch_ratio_params(ctx, x, u, v, q)?;
    let one = Series::one(ctx);
    let t = Series::var(ctx, "t")?;
    let r = r_poly(ctx)?;

    // rho = (1-A0)(1-B0) / ((1-C0)(1-D0)) with the t = 0 constants.
    let one_c = Coeff::one();
    let qv = one_c.clone() - q.clone() * v.clone();
    let a0 = qv.clone() / (x.clone() * (one_c.clone() - v.clone()));
    let b0 = qv.clone() / (x.clone() * (one_c.clone() - q.clone()));
    let c0 = qv.clone() * qv
        / (u.clone()
            * x.clone()
            * (one_c.clone() - v.clone())
            * (one_c.clone() - q.clone()));
    let d0 = one_c.clone() / x.clone();
    let rho = (one_c.clone() - a0) * (one_c.clone() - b0)
        / ((one_c.clone() - c0) * (one_c.clone() - d0));

    let tcap = ctx.cap("t")?.max(0) as usize;
    let state = std::cell::RefCell::new((Series::one(ctx), Series::one(ctx), 0u64));
    let sum = geometric_tail_sum(
        ctx,
        |k| {
            let mut st = state.borrow_mut();
            assert!(st.2 <= k);
            while st.2 < k {
                let i = st.2 as u32;
                let w = r.pow(i)?;
                let num = one.sub(&p.a.mul(&w)?)?.mul(&one.sub(&p.b.mul(&w)?)?)?;
                let den = one.sub(&p.c.mul(&w)?)?.mul(&one.sub(&p.d.mul(&w)?)?)?;
                st.0 = st.0.mul(&num)?;
                st.1 = st.1.mul(&den.invert()?)?;
                st.2 += 1;
            }
            st.0.mul(&st.1)?.mul(&r.pow(k as u32)?)
        },
        &rho,
        2 * tcap + 4,
        4,
    )?;
    let pref = t
        .scale(&(q.clone() * v.clone()))
        .mul(&one.sub(&t)?.sub(&cnst(ctx, x))?.invert()?)?;
    pref.mul(&sum)
}

/// Five-parameter x<->u symmetric series in the second substitution family:
///
/// (x - xvt - 1 + at)/(x - xvt - 1)
///   * sum_k (A2, B2, 1-at; 1-t)_k / (C2, D2, E2; 1-t)_k (1-t)^k
///
/// with A2 = x(1-qt)(1-qv)/((1-t)(1-v)), B2 = x(1-vt)(1-qv)/((1-t)(1-q)),
/// C2 = u x (1-qv)^2 (1-qt)(1-vt)/((1-t)^2 (1-v)(1-q)),
/// D2 = x(1-vt)(1-t), E2 = (1-at)(1-t)/(u(1-vt)); t-graded via (1-at;1-t)_k.
pub fn h_series_second(
    ctx: &Arc<SeriesContext>,
    x: &Coeff,
    u: &Coeff,
    q: &Coeff,
    v: &Coeff,
    a: &Coeff,
) -> Result<Series, SeriesError> {
    let one = Series::one(ctx);
    let t = Series::var(ctx, "t")?;
    let r = r_poly(ctx)?;
    let one_c = Coeff::one();
    let qv = one_c.clone() - q.clone() * v.clone();
    let omv = one_c.clone() - v.clone();
    let omq = one_c.clone() - q.clone();
    let qt = one.sub(&t.scale(q))?;
    let vt = one.sub(&t.scale(v))?;
    let e_at = one.sub(&t.scale(a))?;

    let a2 = qt.scale(&(x.clone() * qv.clone() / omv.clone())).mul(&r.invert()?)?;
    let b2 = vt.scale(&(x.clone() * qv.clone() / omq.clone())).mul(&r.invert()?)?;
    let c2 = qt
        .mul(&vt)?
        .scale(&(u.clone() * x.clone() * qv.clone() * qv / (omv * omq)))
        .mul(&r.pow(2)?.invert()?)?;
    let d2 = vt.mul(&r)?.scale(x);
    let e2 = e_at
        .mul(&r)?
        .mul(&vt.invert()?)?
        .scale(&(one_c.clone() / u.clone()));

    let state = std::cell::RefCell::new((Series::one(ctx), Series::one(ctx), 0u64));
    let sum = bounded_sum(
        ctx,
        &Grading::var("t"),
        |idx| {
            let k = idx - 1;
            let mut st = state.borrow_mut();
            while st.2 < k {
                let i = st.2 as u32;
                let w = r.pow(i)?;
                let num = one
                    .sub(&a2.mul(&w)?)?
                    .mul(&one.sub(&b2.mul(&w)?)?)?
                    .mul(&one.sub(&e_at.mul(&w)?)?)?;
                let den = one
                    .sub(&c2.mul(&w)?)?
                    .mul(&one.sub(&d2.mul(&w)?)?)?
                    .mul(&one.sub(&e2.mul(&w)?)?)?;
                st.0 = st.0.mul(&num)?;
                st.1 = st.1.mul(&den.invert()?)?;
                st.2 += 1;
            }
            st.0.mul(&st.1)?.mul(&r.pow(k as u32)?)
        },
        |idx| idx as i64 - 1,
    )?;

    let gate = cnst(ctx, x).sub(&t.scale(&(x.clone() * v.clone())))?.sub(&one)?;
    let pref = gate.add(&t.scale(a))?.mul(&gate.invert()?)?;
    pref.mul(&sum)
}

/// The q -> 1, a = 1/t limit of the second family, with the u-slot kept
/// formal as ubar (term k carries ubar^k exactly):
///
/// x(1-vt)/(x-xvt-1) * sum_k (x; 1-t)_k / (x(1-vt)(1-t); 1-t)_k ubar^k (1-t)^k.
pub fn h_series_limit_formal(
    ctx: &Arc<SeriesContext>,
    x: &Coeff,
    v: &Coeff,
) -> Result<Series, SeriesError> {
    let one = Series::one(ctx);
    let t = Series::var(ctx, "t")?;
    let r = r_poly(ctx)?;
    let vt = one.sub(&t.scale(v))?;
    let lower = vt.mul(&r)?.scale(x);

    let state = std::cell::RefCell::new((Series::one(ctx), Series::one(ctx), 0u64));
    let sum = bounded_sum(
        ctx,
        &Grading::var("ubar"),
        |idx| {
            let k = idx - 1;
            let mut st = state.borrow_mut();
            while st.2 < k {
                let i = st.2 as u32;
                let w = r.pow(i)?;
                st.0 = st.0.mul(&one.sub(&w.scale(x))?)?;
                st.1 = st.1.mul(&one.sub(&lower.mul(&w)?)?.invert()?)?;
                st.2 += 1;
            }
            Series::monomial(ctx, "ubar", k as i64, Coeff::one())?
                .mul(&st.0)?
                .mul(&st.1)?
                .mul(&r.pow(k as u32)?)
        },
        |idx| idx as i64 - 1,
    )?;
    let gate = cnst(ctx, x).sub(&t.scale(&(x.clone() * v.clone())))?.sub(&one)?;
    vt.scale(x).mul(&gate.invert()?)?.mul(&sum)
}

/// Same series with u specialized to a rational with |u| > 1, resummed
/// geometrically (ratio 1/u) for the x <-> u symmetry check.
pub fn h_series_limit_specialized(
    ctx: &Arc<SeriesContext>,
    x: &Coeff,
    u: &Coeff,
    v: &Coeff,
) -> Result<Series, SeriesError> {
    let one = Series::one(ctx);
    let t = Series::var(ctx, "t")?;
    let r = r_poly(ctx)?;
    let vt = one.sub(&t.scale(v))?;
    let lower = vt.mul(&r)?.scale(x);
    let rho = Coeff::one() / u.clone();
    let tcap = ctx.cap("t")?.max(0) as usize;

    let state = std::cell::RefCell::new((Series::one(ctx), Series::one(ctx), 0u64));
    let sum = geometric_tail_sum(
        ctx,
        |k| {
            let mut st = state.borrow_mut();
            assert!(st.2 <= k);
            while st.2 < k {
                let i = st.2 as u32;
                let w = r.pow(i)?;
                st.0 = st.0.mul(&one.sub(&w.scale(x))?)?;
                st.1 = st.1.mul(&one.sub(&lower.mul(&w)?)?.invert()?)?;
                st.2 += 1;
            }
            let mut upow = Coeff::one();
            for _ in 0..k {
                upow /= u.clone();
            }
            st.0.mul(&st.1)?
                .scale(&upow)
                .mul(&r.pow(k as u32)?)
        },
        &rho,
        2 * tcap + 4,
        4,
    )?;
    let gate = cnst(ctx, x).sub(&t.scale(&(x.clone() * v.clone())))?.sub(&one)?;
    vt.scale(x).mul(&gate.invert()?)?.mul(&sum)
}

/// Both sides of the terminating-parameter transformation between two
/// 4-series with base and argument 1-r, as exact series in (a, r) with
/// b, c, d, e rational. Term k vanishes to total (a, r) order >= k; the
/// mandatory (q; q)_k denominator is paired factorwise against the
/// ((1-r)^j; 1-r)_k upper parameter so the Laurent debt stays at one.
pub fn transformation_sides(
    ctx: &Arc<SeriesContext>,
    j: u32,
    b: &Coeff,
    c: &Coeff,
    d: &Coeff,
    e: &Coeff,
) -> Result<(Series, Series), SeriesError> {
    let one = Series::one(ctx);
    let w = Series::poly_in(ctx, "r", &[Coeff::one(), -Coeff::one()])?; // 1 - r
    let one_minus_a = one.sub(&Series::var(ctx, "a")?)?;

    // left: uppers (1-r)^j, 1-a, b, c; lowers (besides q) d, e, F_l
    let f_l = w
        .pow(j + 1)?
        .mul(&one_minus_a)?
        .scale(&(b.clone() * c.clone() / (d.clone() * e.clone())));
    let left = phi_sum(
        ctx,
        j,
        &w,
        &one_minus_a,
        &[cnst(ctx, b), cnst(ctx, c)],
        &[cnst(ctx, d), cnst(ctx, e), f_l],
    )?;

    // right: uppers (1-r)^j, 1-a, d/b, d/c; lowers d, de/bc, F_r
    let f_r = w
        .pow(j + 1)?
        .mul(&one_minus_a)?
        .scale(&(Coeff::one() / e.clone()));
    let phi_r = phi_sum(
        ctx,
        j,
        &w,
        &one_minus_a,
        &[
            cnst(ctx, &(d.clone() / b.clone())),
            cnst(ctx, &(d.clone() / c.clone())),
        ],
        &[
            cnst(ctx, d),
            cnst(ctx, &(d.clone() * e.clone() / (b.clone() * c.clone()))),
            f_r,
        ],
    )?;

    // prefactor ((1-r)/e, (1-r)(1-a)bc/de; 1-r)_j / ((1-r)(1-a)/e, (1-r)bc/de; 1-r)_j
    let bc_de = b.clone() * c.clone() / (d.clone() * e.clone());
    let p1 = w.scale(&(Coeff::one() / e.clone()));
    let p2 = w.mul(&one_minus_a)?.scale(&bc_de);
    let p3 = w.mul(&one_minus_a)?.scale(&(Coeff::one() / e.clone()));
    let p4 = w.scale(&bc_de);
    let num = crate::qseries::qpochhammer_multi(&[p1, p2], &w, j)?;
    let den = crate::qseries::qpochhammer_multi(&[p3, p4], &w, j)?;
    let right = num.mul(&den.invert()?)?.mul(&phi_r)?;
    Ok((left, right))
}

/// Partial 4-series with uppers ((1-r)^j, 1-a, u1, u2), lowers
/// (q = 1-r, l1, l2, l3), base and argument 1-r, summed under the total
/// (a, r) grading. The ((1-r)^j; 1-r)_k / (1-r; 1-r)_k ratio is built
/// factor by factor: [1 - (1-r)^(j+i)] / [1 - (1-r)^(i+1)].
fn phi_sum(
    ctx: &Arc<SeriesContext>,
    j: u32,
    w: &Series,
    one_minus_a: &Series,
    uppers: &[Series],
    lowers: &[Series],
) -> Result<Series, SeriesError> {
    let one = Series::one(ctx);
    if j == 0 {
        // (1; 1-r)_k = 0 for k >= 1: only the k = 0 term survives.
        return Ok(one);
    }
    let state = std::cell::RefCell::new((Series::one(ctx), Series::one(ctx), 0u64));
    bounded_sum(
        ctx,
        &Grading::total(&["a", "r"]),
        |idx| {
            let k = idx - 1;
            let mut st = state.borrow_mut();
            while st.2 < k {
                let i = st.2 as u32;
                let wi = w.pow(i)?;
                // paired ratio with unit r-debt
                let ratio = one
                    .sub(&w.pow(j + i)?)?
                    .mul(&one.sub(&w.pow(i + 1)?)?.invert()?)?;
                let mut num = ratio.mul(&one.sub(&one_minus_a.mul(&wi)?)?)?;
                for up in uppers {
                    num = num.mul(&one.sub(&up.mul(&wi)?)?)?;
                }
                let mut den = Series::one(ctx);
                for lo in lowers {
                    den = den.mul(&one.sub(&lo.mul(&wi)?)?)?;
                }
                st.0 = st.0.mul(&num)?;
                st.1 = st.1.mul(&den.invert()?)?;
                st.2 += 1;
            }
            st.0.mul(&st.1)?.mul(&w.pow(k as u32)?)
        },
        |idx| idx as i64 - 1,
    )
}

