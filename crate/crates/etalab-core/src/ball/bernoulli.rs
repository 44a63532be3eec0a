//! Bernoulli numbers as exact rationals, via the tangent-number triangle.
//! The integer triangle is cached globally; balls are cut to precision on
//! demand.

use num_bigint::BigInt;
use num_traits::One;
use std::sync::{LazyLock, Mutex};

use super::rball::RBall;
use super::real::Real;

static TANGENT: LazyLock<Mutex<Vec<BigInt>>> = LazyLock::new(|| Mutex::new(Vec::new()));

/// Tangent number T_r: T_1 = 1, T_2 = 2, T_3 = 16, T_4 = 272, ...
fn tangent_number(r: usize) -> BigInt {
    let mut cache = TANGENT.lock().unwrap();
    if cache.len() < r {
        // The triangle is recomputed from scratch; grow geometrically so a
        // ladder of incremental requests stays amortized quadratic.
        let n = r.max(cache.len() * 2).max(16);
        let mut t: Vec<BigInt> = Vec::with_capacity(n);
        t.push(BigInt::one());
        for i in 1..n {
            let prev = t[i - 1].clone();
            t.push(prev * BigInt::from(i));
        }
        for k in 1..n {
            for j in k..n {
                let a = &t[j - 1] * BigInt::from(j - k);
                let b = &t[j] * BigInt::from(j - k + 2);
                t[j] = a + b;
            }
        }
        *cache = t;
    }
    cache[r - 1].clone()
}

/// Exact B_{2r} as (numerator, denominator), r >= 1 (unreduced but exact).
pub fn bernoulli_even_exact(two_r: usize) -> (BigInt, BigInt) {
    assert!(two_r >= 2 && two_r % 2 == 0);
    let r = two_r / 2;
    let t = tangent_number(r);
    let four_r = BigInt::one() << (2 * r);
    let den = &four_r * (&four_r - BigInt::one());
    let mut num = t * BigInt::from(2 * r);
    if r % 2 == 0 {
        num = -num;
    }
    (num, den)
}

/// B_k as a ball for even k >= 2 (plus B_0 = 1 and B_1 = -1/2 for
/// completeness); odd k >= 3 gives exactly zero.
pub(crate) fn bernoulli_rball(k: usize, prec: u32) -> RBall {
    match k {
        0 => RBall::from_i64(1),
        1 => RBall::exact(Real::from_mant_exp(BigInt::from(-1), -1)),
        _ if k % 2 == 1 => RBall::zero(),
        _ => {
            let (num, den) = bernoulli_even_exact(k);
            let num = RBall::exact(Real::from_bigint(num));
            num.div(&RBall::exact(Real::from_bigint(den)), prec)
                .expect("denominator nonzero")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_tangent_numbers() {
        let want = [1u64, 2, 16, 272, 7936];
        for (r, b) in want.iter().enumerate() {
            assert_eq!(tangent_number(r + 1), BigInt::from(*b));
        }
    }

    #[test]
    fn classic_bernoulli_values() {
        // (k, num, den) with the fraction in lowest terms.
        let cases: [(usize, i64, i64); 5] =
            [(2, 1, 6), (4, -1, 30), (6, 1, 42), (8, -1, 30), (10, 5, 66)];
        for (k, n, d) in cases {
            let (num, den) = bernoulli_even_exact(k);
            // Cross-multiply: num/den == n/d.
            assert_eq!(num * BigInt::from(d), BigInt::from(n) * den, "B_{k}");
        }
    }

    #[test]
    fn ball_encloses_one_sixth() {
        let b = bernoulli_rball(2, 128);
        let six = b.mul_i64(6, 128);
        let diff = six.mid.sub_exact(&Real::from_i64(1)).abs().abs_mag_up();
        assert!(diff.cmp(&six.rad.add_up(&super::super::mag::Mag::pow2(-100)))
            == std::cmp::Ordering::Less);
    }
}
