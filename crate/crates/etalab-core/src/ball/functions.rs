//! Elementary real functions with certified error bounds: exp, ln, sin/cos,
//! atan2, and the constants pi and ln 2.
//!
//! All kernels work on exact dyadic midpoints and return an [`RBall`]; the
//! complex layer is responsible for propagating an input ball's own radius
//! analytically (derivative bounds) on top of what these return.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::sync::{LazyLock, Mutex};

use super::mag::Mag;
use super::rball::RBall;
use super::real::Real;
use crate::error::{Error, Result};

/// Arguments beyond this magnitude are rejected; nothing in the problem
/// domain comes close, and the cap keeps exponent arithmetic trivially safe.
const ARG_MSB_CAP: i64 = 44;

fn guard_arg(x: &Real) -> Result<()> {
    match x.msb() {
        Some(m) if m > ARG_MSB_CAP => Err(Error::PrecisionOverflow(m as u64)),
        _ => Ok(()),
    }
}

// ---------------------------------------------------------------------------
// constants
// ---------------------------------------------------------------------------

/// atan(1/q) * 2^w as (integer, error-in-ulps), by the alternating Taylor
/// series in exact integer arithmetic.
fn atan_inv_scaled(q: u64, w: u64) -> (BigInt, u64) {
    let q2 = BigInt::from(q) * BigInt::from(q);
    let mut qpow = BigInt::from(q); // q^(2k+1)
    let mut acc = BigInt::zero();
    let mut terms: u64 = 0;
    let top: BigInt = BigInt::one() << w;
    let mut k: u64 = 0;
    loop {
        let den = &qpow * BigInt::from(2 * k + 1);
        if den > top {
            break;
        }
        let term = (BigInt::one() << w) / den;
        if k % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
        terms += 1;
        qpow *= &q2;
        k += 1;
    }
    // One floor-error ulp per term plus the alternating tail (≤ 1 ulp since
    // the first omitted term is already below one).
    (acc, terms + 2)
}

fn compute_pi(prec: u32) -> RBall {
    let w = prec as u64 + 32;
    let (a5, e5) = atan_inv_scaled(5, w);
    let (a239, e239) = atan_inv_scaled(239, w);
    let acc = a5 * BigInt::from(16) - a239 * BigInt::from(4);
    let err_ulps = 16 * e5 + 4 * e239;
    RBall {
        mid: Real::from_mant_exp(acc, -(w as i64)),
        rad: Mag::from_u64(err_ulps).mul_2exp(-(w as i64)),
    }
}

fn compute_ln2(prec: u32) -> RBall {
    // ln 2 = 2 atanh(1/3) = sum 2 / ((2k+1) 3^(2k+1)).
    let w = prec as u64 + 32;
    let mut pw = BigInt::from(3);
    let mut acc = BigInt::zero();
    let mut terms: u64 = 0;
    let top: BigInt = BigInt::one() << (w + 1);
    let mut k: u64 = 0;
    loop {
        let den = &pw * BigInt::from(2 * k + 1);
        if den > top {
            break;
        }
        acc += (BigInt::one() << (w + 1)) / den;
        terms += 1;
        pw *= 9u32;
        k += 1;
    }
    // Positive series: floor errors (1 ulp each) plus geometric tail (≤ 2 ulps).
    RBall {
        mid: Real::from_mant_exp(acc, -(w as i64)),
        rad: Mag::from_u64(terms + 3).mul_2exp(-(w as i64)),
    }
}

struct ConstCache {
    prec: u32,
    value: RBall,
}

static PI_CACHE: LazyLock<Mutex<Option<ConstCache>>> = LazyLock::new(|| Mutex::new(None));
static LN2_CACHE: LazyLock<Mutex<Option<ConstCache>>> = LazyLock::new(|| Mutex::new(None));

fn cached_const(
    cache: &Mutex<Option<ConstCache>>,
    prec: u32,
    compute: fn(u32) -> RBall,
) -> RBall {
    let mut guard = cache.lock().unwrap();
    if let Some(c) = guard.as_ref() {
        if c.prec >= prec {
            return c.value.round(prec + 8);
        }
    }
    let target = prec.next_multiple_of(256);
    let value = compute(target);
    let out = value.round(prec + 8);
    *guard = Some(ConstCache { prec: target, value });
    out
}

pub(crate) fn pi_ball(prec: u32) -> RBall {
    cached_const(&PI_CACHE, prec, compute_pi)
}

pub(crate) fn ln2_ball(prec: u32) -> RBall {
    cached_const(&LN2_CACHE, prec, compute_ln2)
}

// ---------------------------------------------------------------------------
// exp / ln
// ---------------------------------------------------------------------------

pub(crate) fn exp_real(x: &Real, prec: u32) -> Result<RBall> {
    guard_arg(x)?;
    if x.is_zero() {
        return Ok(RBall::from_i64(1));
    }
    let j = (prec as f64).sqrt() as i64;
    let j = j.clamp(8, 64);
    let wp = prec + 64 + 2 * j as u32;

    // x = m ln2 + r with |r| <= ~0.4
    let ln2 = ln2_ball(wp + 48);
    let m = (x.to_f64_approx() / std::f64::consts::LN_2).round();
    debug_assert!(m.abs() < 9e15);
    let m = m as i64;
    let r = RBall::exact(x.clone()).sub(&ln2.mul_i64(m, wp + 48), wp + 48);
    debug_assert!(r.abs_up().log2_approx() < 0.0);

    // Halve j times, Taylor, square back.
    let u = r.mul_2exp(-j);
    let mut sum = RBall::from_i64(1);
    let mut term = RBall::from_i64(1);
    let cutoff = Mag::pow2(-(wp as i64) - 8);
    let mut k: i64 = 1;
    loop {
        term = term.mul(&u, wp).div_i64(k, wp);
        sum = sum.add(&term, wp);
        if term.abs_up().cmp(&cutoff) == std::cmp::Ordering::Less {
            break;
        }
        k += 1;
        debug_assert!(k < 10_000);
    }
    // Tail: |u| <= 2^-8, factorial decay => remainder below twice the next term.
    sum.rad = sum.rad.add_up(&term.abs_up().mul_up(&u.abs_up()).mul_2exp(1));
    for _ in 0..j {
        sum = sum.mul(&sum, wp);
    }
    Ok(sum.mul_2exp(m).round(prec))
}

pub(crate) fn ln_real(x: &Real, prec: u32) -> Result<RBall> {
    if x.is_zero() || x.is_negative() {
        return Err(Error::LogOnBranchCut);
    }
    let wp = prec + 64;
    let y0 = Real::from_f64_exact(x.log2_abs_approx() * std::f64::consts::LN_2);
    let e = exp_real(&y0.neg(), wp + 16)?;
    let u = RBall::exact(x.clone()).mul(&e, wp + 16).sub(&RBall::from_i64(1), wp + 16);
    // |u| = |e^(ln x - y0) - 1| is tiny; the series below needs |u| < 1/2.
    if u.abs_up().log2_approx() > -2.0 {
        return Err(Error::PrecisionOverflow(prec as u64));
    }
    // ln(1+u) = u - u^2/2 + u^3/3 - ...
    let cutoff = Mag::pow2(-(wp as i64) - 8);
    let mut pw = u.clone();
    let mut sum = u.clone();
    let mut k: i64 = 2;
    loop {
        pw = pw.mul(&u, wp);
        let term = pw.div_i64(k, wp);
        sum = if k % 2 == 0 { sum.sub(&term, wp) } else { sum.add(&term, wp) };
        if term.abs_up().cmp(&cutoff) == std::cmp::Ordering::Less {
            break;
        }
        k += 1;
        debug_assert!(k < 10_000);
    }
    sum.rad = sum.rad.add_up(&pw.abs_up().mul_up(&u.abs_up()).mul_2exp(1));
    Ok(sum.add(&RBall::exact(y0), wp).round(prec))
}

// ---------------------------------------------------------------------------
// sin / cos / atan2
// ---------------------------------------------------------------------------

pub(crate) fn sincos_real(x: &Real, prec: u32) -> Result<(RBall, RBall)> {
    guard_arg(x)?;
    let wp = prec + 64;
    let pi = pi_ball(wp + 48);
    let half_pi = pi.mul_2exp(-1);
    let k = (x.to_f64_approx() / std::f64::consts::FRAC_PI_2).round();
    debug_assert!(k.abs() < 9e15);
    let k = k as i64;
    let r = RBall::exact(x.clone()).sub(&half_pi.mul_i64(k, wp + 48), wp + 48);
    debug_assert!(r.abs_up().log2_approx() < 0.2);

    let r2 = r.mul(&r, wp);
    let mut c = RBall::from_i64(1);
    let mut s = r.clone();
    let mut term = RBall::from_i64(1); // r^(2i) / (2i)!
    let cutoff = Mag::pow2(-(wp as i64) - 8);
    let mut i: i64 = 1;
    loop {
        term = term.mul(&r2, wp).div_i64((2 * i - 1) * 2 * i, wp);
        let tc = term.clone();
        let ts = term.mul(&r, wp).div_i64(2 * i + 1, wp);
        if i % 2 == 1 {
            c = c.sub(&tc, wp);
            s = s.sub(&ts, wp);
        } else {
            c = c.add(&tc, wp);
            s = s.add(&ts, wp);
        }
        if tc.abs_up().cmp(&cutoff) == std::cmp::Ordering::Less {
            // Alternating with decreasing terms: remainder below the next term.
            c.rad = c.rad.add_up(&tc.abs_up());
            s.rad = s.rad.add_up(&tc.abs_up());
            break;
        }
        i += 1;
        debug_assert!(i < 10_000);
    }
    let (cos, sin) = match k.rem_euclid(4) {
        0 => (c, s),
        1 => (s.neg(), c),
        2 => (c.neg(), s.neg()),
        _ => (s, c.neg()),
    };
    Ok((cos.round(prec), sin.round(prec)))
}

/// atan on a ball already reduced to |t| <= ~1.
fn atan_core(t: &RBall, prec: u32) -> Result<RBall> {
    let wp = prec + 48;
    // Three angle halvings: t <- t / (1 + sqrt(1 + t^2)).
    let mut t = t.clone();
    for _ in 0..3 {
        let t2 = t.mul(&t, wp);
        let root = t2.add(&RBall::from_i64(1), wp).sqrt(wp);
        t = t.div(&root.add(&RBall::from_i64(1), wp), wp)?;
    }
    let t2 = t.mul(&t, wp);
    let mut pw = t.clone();
    let mut sum = t.clone();
    let cutoff = Mag::pow2(-(wp as i64) - 8);
    let mut k: i64 = 1;
    loop {
        pw = pw.mul(&t2, wp);
        let term = pw.div_i64(2 * k + 1, wp);
        sum = if k % 2 == 1 { sum.sub(&term, wp) } else { sum.add(&term, wp) };
        if term.abs_up().cmp(&cutoff) == std::cmp::Ordering::Less {
            sum.rad = sum.rad.add_up(&term.abs_up());
            break;
        }
        k += 1;
        debug_assert!(k < 10_000);
    }
    Ok(sum.mul_2exp(3).round(prec))
}

fn atan_any(t: &RBall, prec: u32) -> Result<RBall> {
    let wp = prec + 48;
    if t.abs_up().log2_approx() <= 0.1 {
        return atan_core(t, prec);
    }
    // |t| > 1: atan t = sign(t) * pi/2 - atan(1/t).
    let inv = RBall::from_i64(1).div(t, wp)?;
    let half_pi = pi_ball(wp).mul_2exp(-1);
    let signed = if t.mid.is_negative() { half_pi.neg() } else { half_pi };
    Ok(signed.sub(&atan_core(&inv, wp)?, wp).round(prec))
}

/// Principal argument of the exact complex midpoint (re, im); (0,0) must be
/// excluded by the caller. Exactly-negative-real inputs return pi.
pub(crate) fn atan2_real(im: &Real, re: &Real, prec: u32) -> Result<RBall> {
    guard_arg(im)?;
    guard_arg(re)?;
    let wp = prec + 48;
    if re.sign() > 0 {
        let t = RBall::exact(im.clone()).div(&RBall::exact(re.clone()), wp)?;
        return atan_any(&t, prec);
    }
    if im.sign() > 0 {
        let t = RBall::exact(re.clone()).div(&RBall::exact(im.clone()), wp)?;
        let half_pi = pi_ball(wp).mul_2exp(-1);
        return Ok(half_pi.sub(&atan_any(&t, wp)?, wp).round(prec));
    }
    if im.sign() < 0 {
        let t = RBall::exact(re.clone()).div(&RBall::exact(im.clone()), wp)?;
        let half_pi = pi_ball(wp).mul_2exp(-1);
        return Ok(half_pi.neg().sub(&atan_any(&t, wp)?, wp).round(prec));
    }
    if re.sign() < 0 {
        return Ok(pi_ball(prec));
    }
    Err(Error::LogOnBranchCut)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_digits(b: &RBall, reference: &str, digits: u32) {
        let (r, perr) = Real::parse_decimal(reference, 600).unwrap();
        let diff = b.mid.sub_exact(&r).abs().abs_mag_up().add_up(&b.rad).add_up(&perr);
        let tol = Mag::pow10_down(-(digits as i64));
        assert!(
            diff.cmp(&tol) == std::cmp::Ordering::Less,
            "|diff| = 1e{:.1} >= 1e-{digits}",
            diff.log2_approx() / std::f64::consts::LOG2_10,
        );
    }

    const PI_50: &str = "3.14159265358979323846264338327950288419716939937510";
    const LN2_50: &str = "0.69314718055994530941723212145817656807550013436026";

    #[test]
    fn pi_matches_reference() {
        let p = pi_ball(256);
        check_digits(&p, PI_50, 48);
        assert!(p.rad.log2_approx() < -250.0);
    }

    #[test]
    fn ln2_matches_reference() {
        let l = ln2_ball(256);
        check_digits(&l, LN2_50, 48);
    }

    #[test]
    fn exp_of_one_is_e() {
        let e = exp_real(&Real::from_i64(1), 200).unwrap();
        check_digits(&e, "2.71828182845904523536028747135266249775724709369996", 48);
    }

    #[test]
    fn exp_ln_round_trip() {
        let x = Real::from_mant_exp(BigInt::from(1234567), -10); // ~1205.6
        let l = ln_real(&x, 256).unwrap();
        let back = exp_real(&l.mid, 256).unwrap();
        let diff = back.mid.sub_exact(&x).abs().abs_mag_up();
        let budget = back.rad.add_up(&l.rad.mul_up(&Mag::from_u64(4096)));
        assert!(diff.cmp(&budget.add_up(&Mag::pow2(-200))) == std::cmp::Ordering::Less);
    }

    #[test]
    fn ln_one_is_zero() {
        let l = ln_real(&Real::from_i64(1), 128).unwrap();
        assert!(l.mid.is_zero() || l.mid.abs_mag_up().log2_approx() < -120.0);
        assert!(l.rad.log2_approx() < -120.0);
    }

    #[test]
    fn sincos_quadrants() {
        // cos(pi) ~ -1, sin(pi) ~ 0 evaluated at a dyadic close to pi.
        let (pi_approx, _) = pi_ball(128).mid.round_prec(100);
        let (c, s) = sincos_real(&pi_approx, 128).unwrap();
        let one = Real::from_i64(-1);
        assert!(c.mid.sub_exact(&one).abs().abs_mag_up().log2_approx() < -90.0);
        assert!(s.mid.abs().abs_mag_up().log2_approx() < -90.0);
    }

    #[test]
    fn atan2_axes() {
        // arg(1) = 0
        let a = atan2_real(&Real::zero(), &Real::from_i64(1), 128).unwrap();
        assert!(a.abs_up().log2_approx() < -120.0);
        // arg(i) = pi/2
        let a = atan2_real(&Real::from_i64(1), &Real::zero(), 128).unwrap();
        check_digits(&a, "1.57079632679489661923132169163975144209858469968755", 30);
        // arg(-1) = pi
        let a = atan2_real(&Real::zero(), &Real::from_i64(-1), 128).unwrap();
        check_digits(&a, PI_50, 30);
        // arg(-1 - i) in third quadrant: -3pi/4
        let a = atan2_real(&Real::from_i64(-1), &Real::from_i64(-1), 128).unwrap();
        check_digits(&a, "-2.35619449019234492884698253745962716314787704953133", 30);
    }
}
