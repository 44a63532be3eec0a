//! Truncated power-series arithmetic over complex balls. Coefficient index k
//! carries the x^k term; everything is truncated at a fixed order.

use crate::ball::BallComplex;
use crate::error::Result;

pub(crate) fn zero_series(order: usize, prec: u32) -> Vec<BallComplex> {
    vec![BallComplex::zero(prec); order + 1]
}

pub(crate) fn add_assign(dst: &mut [BallComplex], src: &[BallComplex]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d = d.add(s);
    }
}

/// Full truncated product, O(K^2).
pub(crate) fn mul_trunc(a: &[BallComplex], b: &[BallComplex], prec: u32) -> Vec<BallComplex> {
    let order = a.len().min(b.len()) - 1;
    let mut out = zero_series(order, prec);
    for (i, ai) in a.iter().enumerate().take(order + 1) {
        if ai.is_exact_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(order + 1 - i) {
            out[i + j] = out[i + j].add(&ai.mul(bj));
        }
    }
    out
}

/// Multiply by the linear polynomial (c + x) in place, truncated.
pub(crate) fn mul_linear(a: &[BallComplex], c: &BallComplex) -> Vec<BallComplex> {
    let order = a.len() - 1;
    let mut out = Vec::with_capacity(order + 1);
    for k in 0..=order {
        let mut t = a[k].mul(c);
        if k > 0 {
            t = t.add(&a[k - 1]);
        }
        out.push(t);
    }
    out
}

/// Divide by the linear polynomial (c + x): q_0 = a_0/c, q_k = (a_k - q_{k-1})/c.
pub(crate) fn div_linear(a: &[BallComplex], c: &BallComplex) -> Result<Vec<BallComplex>> {
    let mut out: Vec<BallComplex> = Vec::with_capacity(a.len());
    for (k, ak) in a.iter().enumerate() {
        let num = if k == 0 { ak.clone() } else { ak.sub(&out[k - 1]) };
        out.push(num.div(c)?);
    }
    Ok(out)
}

pub(crate) fn scale(a: &[BallComplex], s: &BallComplex) -> Vec<BallComplex> {
    a.iter().map(|x| x.mul(s)).collect()
}

/// Evaluate at a point (Horner).
pub(crate) fn eval(a: &[BallComplex], x: &BallComplex) -> BallComplex {
    let mut acc = BallComplex::zero(x.prec());
    for c in a.iter().rev() {
        acc = acc.mul(x).add(c);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ball::BallComplex;

    fn c(v: i64, prec: u32) -> BallComplex {
        BallComplex::from_i64(v, 0, prec)
    }

    #[test]
    fn mul_div_linear_round_trip() {
        let prec = 128;
        let s = vec![c(3, prec), c(-1, prec), c(7, prec), c(0, prec)];
        let alpha = BallComplex::from_i64(2, 5, prec);
        let prod = mul_linear(&s, &alpha);
        let back = div_linear(&prod, &alpha).unwrap();
        for (x, y) in back.iter().zip(&s) {
            assert!(x.intersects(y));
        }
    }

    #[test]
    fn trunc_product_matches_hand_expansion() {
        let prec = 128;
        // (1 + 2x)(3 + x) = 3 + 7x + 2x^2
        let a = vec![c(1, prec), c(2, prec), c(0, prec)];
        let b = vec![c(3, prec), c(1, prec), c(0, prec)];
        let p = mul_trunc(&a, &b, prec);
        for (got, want) in p.iter().zip([3, 7, 2]) {
            assert!(got.contains(&c(want, prec)));
        }
    }
}
