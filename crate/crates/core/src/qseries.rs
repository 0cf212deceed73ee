//! q-Pochhammer products and basic hypergeometric partial sums.

use crate::error::SeriesError;
use crate::series::{Scalar, TruncatedSeries};
use std::ops::Neg;

/// The q-shifted factorial (a; q)_k = prod_{i=0}^{k-1} (1 - a q^i).
pub fn qpochhammer<C: Scalar>(
    a: &TruncatedSeries<C>,
    q: &TruncatedSeries<C>,
    k: u32,
) -> Result<TruncatedSeries<C>, SeriesError> {
    let ctx = a.context();
    let one = TruncatedSeries::one(ctx);
    let mut acc = one.clone();
    let mut aqi = a.clone();
    for i in 0..k {
        acc = acc.mul(&one.sub(&aqi)?)?;
        if i + 1 < k {
            aqi = aqi.mul(q)?;
        }
    }
    Ok(acc)
}

/// Multi-parameter form (a_1, ..., a_m; q)_k = prod over the single ones.
pub fn qpochhammer_multi<C: Scalar>(
    params: &[TruncatedSeries<C>],
    q: &TruncatedSeries<C>,
    k: u32,
) -> Result<TruncatedSeries<C>, SeriesError> {
    let ctx = q.context();
    let mut acc = TruncatedSeries::one(ctx);
    for a in params {
        acc = acc.mul(&qpochhammer(a, q, k)?)?;
    }
    Ok(acc)
}

/// Partial sum through k = kmax of the basic hypergeometric series
///
/// ```text
/// sum_k  (a_1,...,a_alpha; q)_k / (q, b_1,...,b_beta; q)_k
///        * ((-1)^k q^C(k,2))^(1 + beta - alpha) * z^k.
/// ```
///
/// The mandatory (q; q)_k denominator factor is included. When it (or any
/// lower factor) has positive valuation, the context must afford the
/// corresponding Laurent debt; a lower factor that vanishes identically is
/// reported as degenerate.
pub fn basic_hypergeometric<C: Scalar>(
    uppers: &[TruncatedSeries<C>],
    lowers: &[TruncatedSeries<C>],
    q: &TruncatedSeries<C>,
    z: &TruncatedSeries<C>,
    kmax: u32,
) -> Result<TruncatedSeries<C>, SeriesError> {
    let ctx = q.context();
    let one = TruncatedSeries::one(ctx);
    let beta_minus_alpha_plus_one = 1 + lowers.len() as i64 - uppers.len() as i64;

    let mut sum = TruncatedSeries::zero(ctx);
    // Running products, updated factor by factor.
    let mut num = one.clone();
    let mut den = one.clone();
    if beta_minus_alpha_plus_one < 0 {
        return Err(SeriesError::Degenerate(
            "alpha > beta + 1 is outside the supported range".into(),
        ));
    }
    let mut upper_pows: Vec<TruncatedSeries<C>> = uppers.to_vec();
    let mut lower_pows: Vec<TruncatedSeries<C>> = lowers.to_vec();
    let mut q_to_k = q.clone(); // q^k at step k
    let mut q_to_km1 = one.clone(); // q^{k-1} at step k
    let mut z_pow = one.clone();
    let mut corr = one.clone(); // ((-1)^k q^C(k,2))^(1+beta-alpha)

    for k in 0..=kmax {
        if k > 0 {
            // extend (a; q)_{k-1} -> (a; q)_k with factors (1 - a q^{k-1})
            for a in upper_pows.iter_mut() {
                num = num.mul(&one.sub(a)?)?;
                *a = a.mul(q)?;
            }
            den = den.mul(&one.sub(&q_to_k)?)?; // (q; q)_k factor: 1 - q^k
            for b in lower_pows.iter_mut() {
                den = den.mul(&one.sub(b)?)?;
                *b = b.mul(q)?;
            }
            // C(k,2) - C(k-1,2) = k-1: each step multiplies (-q^{k-1})^power.
            for _ in 0..beta_minus_alpha_plus_one {
                corr = corr.mul(&q_to_km1)?.neg();
            }
            q_to_k = q_to_k.mul(q)?;
            q_to_km1 = q_to_km1.mul(q)?;
            z_pow = z_pow.mul(z)?;
        }
        if den.is_zero() {
            return Err(SeriesError::Degenerate(format!(
                "lower Pochhammer factor vanishes identically at k = {k}"
            )));
        }
        if num.is_zero() {
            break; // an upper parameter terminated the series
        }
        let term = num.mul(&den.invert()?)?.mul(&corr)?.mul(&z_pow)?;
        sum = sum.add(&term)?;
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::SeriesContext;
    use crate::{int, rat, Series};

    #[test]
    fn pochhammer_small_cases() {
        let ctx = SeriesContext::new(&[("a", 4), ("q", 4)]);
        let a = Series::var(&ctx, "a").unwrap();
        let q = Series::var(&ctx, "q").unwrap();
        // (a;q)_0 = 1
        assert_eq!(qpochhammer(&a, &q, 0).unwrap(), Series::one(&ctx));
        // (a;q)_1 = 1 - a
        let p1 = qpochhammer(&a, &q, 1).unwrap();
        assert_eq!(p1, Series::one(&ctx).sub(&a).unwrap());
        // (a;q)_2 = (1-a)(1-aq)
        let p2 = qpochhammer(&a, &q, 2).unwrap();
        let expect = Series::one(&ctx)
            .sub(&a)
            .unwrap()
            .mul(&Series::one(&ctx).sub(&a.mul(&q).unwrap()).unwrap())
            .unwrap();
        assert_eq!(p2, expect);
    }

    #[test]
    fn pochhammer_recurrence() {
        // (a;q)_{k+1} = (a;q)_k * (1 - a q^k) for k <= 8
        let ctx = SeriesContext::new(&[("a", 9), ("q", 9)]);
        let a = Series::var(&ctx, "a").unwrap();
        let q = Series::var(&ctx, "q").unwrap();
        for k in 0..=8u32 {
            let lhs = qpochhammer(&a, &q, k + 1).unwrap();
            let qk = q.pow(k).unwrap();
            let rhs = qpochhammer(&a, &q, k)
                .unwrap()
                .mul(&Series::one(&ctx).sub(&a.mul(&qk).unwrap()).unwrap())
                .unwrap();
            assert_eq!(lhs, rhs, "k = {k}");
        }
    }

    #[test]
    fn multi_parameter_product() {
        let ctx = SeriesContext::new(&[("a", 3), ("b", 3), ("q", 3)]);
        let a = Series::var(&ctx, "a").unwrap();
        let b = Series::var(&ctx, "b").unwrap();
        let q = Series::var(&ctx, "q").unwrap();
        let multi = qpochhammer_multi(&[a.clone(), b.clone()], &q, 3).unwrap();
        let single = qpochhammer(&a, &q, 3)
            .unwrap()
            .mul(&qpochhammer(&b, &q, 3).unwrap())
            .unwrap();
        assert_eq!(multi, single);
    }

    #[test]
    fn hypergeometric_kmax_zero_is_one() {
        let ctx = SeriesContext::new(&[("q", 4), ("z", 4)]);
        let q = Series::var(&ctx, "q").unwrap();
        let z = Series::var(&ctx, "z").unwrap();
        let upper = Series::constant(&ctx, rat(1, 2));
        let lower = Series::constant(&ctx, rat(1, 3));
        let s = basic_hypergeometric(&[upper], &[lower], &q, &z, 0).unwrap();
        assert_eq!(s, Series::one(&ctx));
    }

    #[test]
    fn hypergeometric_upper_one_truncates() {
        // (1; q)_k = 0 for k >= 1, so the series collapses to 1.
        let ctx = SeriesContext::new(&[("q", 5), ("z", 5)]);
        let q = Series::var(&ctx, "q").unwrap();
        let z = Series::var(&ctx, "z").unwrap();
        let upper = Series::one(&ctx);
        let lower = Series::constant(&ctx, rat(2, 7));
        for kmax in [0u32, 1, 3, 7] {
            let s = basic_hypergeometric(std::slice::from_ref(&upper), std::slice::from_ref(&lower), &q, &z, kmax)
                .unwrap();
            assert_eq!(s, Series::one(&ctx), "kmax = {kmax}");
        }
    }

    #[test]
    fn hypergeometric_matches_hand_sum() {
        // alpha = beta + 1 (correction factor is the empty power), generic
        // rational parameters, kmax = 2; compare against an independently
        // accumulated term-by-term sum.
        let ctx = SeriesContext::new(&[("q", 6), ("z", 6)]);
        let q = Series::var(&ctx, "q").unwrap();
        let z = Series::var(&ctx, "z").unwrap();
        let a1 = Series::constant(&ctx, rat(1, 2));
        let a2 = Series::constant(&ctx, rat(-1, 3));
        let b1 = Series::constant(&ctx, rat(2, 5));
        let got = basic_hypergeometric(
            &[a1.clone(), a2.clone()],
            std::slice::from_ref(&b1),
            &q,
            &z,
            2,
        )
        .unwrap();

        // Oracle: term_k = (a1;q)_k (a2;q)_k / ((q;q)_k (b1;q)_k) z^k,
        // each Pochhammer built independently by qpochhammer.
        let mut expect = Series::zero(&ctx);
        for k in 0..=2u32 {
            let num = qpochhammer(&a1, &q, k)
                .unwrap()
                .mul(&qpochhammer(&a2, &q, k).unwrap())
                .unwrap();
            let den = qpochhammer(&q, &q, k)
                .unwrap()
                .mul(&qpochhammer(&b1, &q, k).unwrap())
                .unwrap();
            let term = num
                .mul(&den.invert().unwrap())
                .unwrap()
                .mul(&z.pow(k).unwrap())
                .unwrap();
            expect = expect.add(&term).unwrap();
        }
        assert_eq!(got, expect);
        assert_eq!(got.coeff(&[]).unwrap(), int(1));
    }

    #[test]
    fn hypergeometric_correction_factor() {
        // 1phi1 has beta - alpha = 0, so each term carries (-1)^k q^C(k,2).
        // Check k = 2 term explicitly: (a;q)_2 / ((q;q)_2 (b;q)_2) * q * z^2.
        let ctx = SeriesContext::new(&[("q", 8), ("z", 8)]);
        let q = Series::var(&ctx, "q").unwrap();
        let z = Series::var(&ctx, "z").unwrap();
        let a = Series::constant(&ctx, rat(1, 2));
        let b = Series::constant(&ctx, rat(1, 5));
        let s2 = basic_hypergeometric(std::slice::from_ref(&a), std::slice::from_ref(&b), &q, &z, 2).unwrap();
        let s1 = basic_hypergeometric(std::slice::from_ref(&a), std::slice::from_ref(&b), &q, &z, 1).unwrap();
        let term2 = s2.sub(&s1).unwrap();
        let expect = qpochhammer(&a, &q, 2)
            .unwrap()
            .mul(
                &qpochhammer(&q, &q, 2)
                    .unwrap()
                    .mul(&qpochhammer(&b, &q, 2).unwrap())
                    .unwrap()
                    .invert()
                    .unwrap(),
            )
            .unwrap()
            .mul(&q)
            .unwrap()
            .mul(&z.pow(2).unwrap())
            .unwrap();
        assert_eq!(term2, expect);
    }
}
