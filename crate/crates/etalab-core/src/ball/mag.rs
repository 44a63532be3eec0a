//! Non-negative magnitude bounds for ball radii.
//!
//! A `Mag` holds `man * 2^exp` with `man` in `[0.5, 1)` stored in an `f64`
//! and the exponent kept separately in an `i64`, so values far outside the
//! double range are representable. The stored value itself is exact; the
//! `*_up` operations round up and the `*_down` operations round down, each by
//! a fudge factor comfortably larger than one f64 ulp, so chains of them stay
//! rigorous one-sided bounds.

use std::cmp::Ordering;

const BUMP_UP: f64 = 1.0 + 4e-14;
const BUMP_DOWN: f64 = 1.0 - 4e-14;
// For operations that pass through log2-domain f64 arithmetic.
const BUMP_LOG_UP: f64 = 1.0 + 1e-8;
const BUMP_LOG_DOWN: f64 = 1.0 - 1e-8;

const LOG2_10: f64 = std::f64::consts::LOG2_10;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mag {
    man: f64, // 0.0, in [0.5, 1), or +inf
    exp: i64,
}

fn frexp(x: f64) -> (f64, i64) {
    debug_assert!(x.is_finite() && x > 0.0);
    if x < 1e-300 {
        let (m, e) = frexp(x * 2f64.powi(1000));
        return (m, e - 1000);
    }
    if x > 1e300 {
        let (m, e) = frexp(x * 2f64.powi(-1000));
        return (m, e + 1000);
    }
    let bits = x.to_bits();
    let e = ((bits >> 52) & 0x7ff) as i64;
    let man = f64::from_bits((bits & 0x800f_ffff_ffff_ffff) | (1022u64 << 52));
    (man, e - 1022)
}

fn ldexp(man: f64, e: i64) -> f64 {
    // Only used where the result is known to be a normal double.
    man * 2f64.powi(e.clamp(-1000, 1000) as i32)
}

impl Mag {
    pub const ZERO: Mag = Mag { man: 0.0, exp: 0 };

    pub fn zero() -> Mag {
        Mag::ZERO
    }

    pub fn inf() -> Mag {
        Mag { man: f64::INFINITY, exp: 0 }
    }

    pub fn is_zero(&self) -> bool {
        self.man == 0.0
    }

    pub fn is_finite(&self) -> bool {
        self.man.is_finite()
    }

    fn norm(man: f64, exp: i64) -> Mag {
        if man == 0.0 {
            return Mag::ZERO;
        }
        if !man.is_finite() {
            return Mag::inf();
        }
        let (m, e) = frexp(man);
        match exp.checked_add(e) {
            Some(t) if t < (1 << 62) => Mag { man: m, exp: t },
            _ => Mag::inf(),
        }
    }

    /// Exact power of two: 2^e.
    pub fn pow2(e: i64) -> Mag {
        Mag { man: 0.5, exp: e + 1 }
    }

    pub fn from_f64_up(x: f64) -> Mag {
        let x = x.abs();
        if x == 0.0 {
            return Mag::ZERO;
        }
        Mag::norm(x * BUMP_UP, 0)
    }

    pub fn from_u64(x: u64) -> Mag {
        if x == 0 {
            return Mag::ZERO;
        }
        Mag::norm(x as f64 * BUMP_UP, 0)
    }

    pub(crate) fn from_parts(man: f64, exp: i64) -> Mag {
        Mag::norm(man, exp)
    }

    pub fn log2_approx(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        if !self.is_finite() {
            return f64::INFINITY;
        }
        self.exp as f64 + self.man.log2()
    }

    pub fn to_f64_up(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else if !self.is_finite() || self.exp > 1020 {
            f64::INFINITY
        } else if self.exp < -1020 {
            ldexp(1.0, -1020)
        } else {
            ldexp(self.man, self.exp) * BUMP_UP
        }
    }

    pub fn add_up(&self, o: &Mag) -> Mag {
        if self.is_zero() {
            return *o;
        }
        if o.is_zero() {
            return *self;
        }
        if !self.is_finite() || !o.is_finite() {
            return Mag::inf();
        }
        let (hi, lo) = if self.exp >= o.exp { (self, o) } else { (o, self) };
        let gap = hi.exp - lo.exp;
        if gap > 55 {
            return Mag::norm(hi.man * BUMP_UP, hi.exp);
        }
        Mag::norm((hi.man + ldexp(lo.man, -gap)) * BUMP_UP, hi.exp)
    }

    pub fn mul_up(&self, o: &Mag) -> Mag {
        if self.is_zero() || o.is_zero() {
            return Mag::ZERO;
        }
        if !self.is_finite() || !o.is_finite() {
            return Mag::inf();
        }
        match self.exp.checked_add(o.exp) {
            Some(e) => Mag::norm(self.man * o.man * BUMP_UP, e),
            None => Mag::inf(),
        }
    }

    pub fn mul_down(&self, o: &Mag) -> Mag {
        if self.is_zero() || o.is_zero() || !self.is_finite() || !o.is_finite() {
            return Mag::ZERO;
        }
        match self.exp.checked_add(o.exp) {
            Some(e) => Mag::norm(self.man * o.man * BUMP_DOWN, e),
            None => Mag::ZERO,
        }
    }

    /// Upper bound on `self / o`, where `o` must itself be a lower bound of
    /// the true denominator.
    pub fn div_up(&self, o: &Mag) -> Mag {
        if self.is_zero() {
            return Mag::ZERO;
        }
        if o.is_zero() || !self.is_finite() {
            return Mag::inf();
        }
        match self.exp.checked_sub(o.exp) {
            Some(e) => Mag::norm(self.man / o.man * BUMP_UP, e),
            None => Mag::inf(),
        }
    }

    /// Lower bound on `self - o`; clamps at zero.
    pub fn sub_down(&self, o: &Mag) -> Mag {
        if o.is_zero() {
            return *self;
        }
        if !o.is_finite() || self.cmp(o) != Ordering::Greater {
            return Mag::ZERO;
        }
        let gap = self.exp - o.exp;
        if gap > 55 {
            return Mag::norm(self.man * BUMP_DOWN, self.exp);
        }
        Mag::norm((self.man - ldexp(o.man, -gap)) * BUMP_DOWN, self.exp)
    }

    pub fn mul_2exp(&self, e: i64) -> Mag {
        if self.is_zero() || !self.is_finite() {
            return *self;
        }
        match self.exp.checked_add(e) {
            Some(t) => Mag { man: self.man, exp: t },
            None => {
                if e > 0 {
                    Mag::inf()
                } else {
                    Mag::ZERO
                }
            }
        }
    }

    pub fn max(&self, o: &Mag) -> Mag {
        if self.cmp(o) == Ordering::Less {
            *o
        } else {
            *self
        }
    }

    pub fn min(&self, o: &Mag) -> Mag {
        if self.cmp(o) == Ordering::Greater {
            *o
        } else {
            *self
        }
    }

    pub fn cmp(&self, o: &Mag) -> Ordering {
        match (self.is_zero(), o.is_zero()) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {}
        }
        match (self.is_finite(), o.is_finite()) {
            (false, false) => return Ordering::Equal,
            (false, true) => return Ordering::Greater,
            (true, false) => return Ordering::Less,
            _ => {}
        }
        self.exp
            .cmp(&o.exp)
            .then_with(|| self.man.partial_cmp(&o.man).unwrap())
    }

    pub fn hypot_up(&self, o: &Mag) -> Mag {
        if self.is_zero() {
            return *o;
        }
        if o.is_zero() {
            return *self;
        }
        if !self.is_finite() || !o.is_finite() {
            return Mag::inf();
        }
        let (hi, lo) = if self.exp >= o.exp { (self, o) } else { (o, self) };
        let gap = hi.exp - lo.exp;
        if gap > 30 {
            return Mag::norm(hi.man * BUMP_UP * BUMP_UP, hi.exp);
        }
        Mag::norm(hi.man.hypot(ldexp(lo.man, -gap)) * BUMP_UP, hi.exp)
    }

    pub fn hypot_down(&self, o: &Mag) -> Mag {
        if self.is_zero() {
            return *o;
        }
        if o.is_zero() {
            return *self;
        }
        if !self.is_finite() || !o.is_finite() {
            return Mag::inf();
        }
        let (hi, lo) = if self.exp >= o.exp { (self, o) } else { (o, self) };
        let gap = hi.exp - lo.exp;
        if gap > 30 {
            return Mag::norm(hi.man * BUMP_DOWN, hi.exp);
        }
        Mag::norm(hi.man.hypot(ldexp(lo.man, -gap)) * BUMP_DOWN, hi.exp)
    }

    pub fn sqrt_up(&self) -> Mag {
        if self.is_zero() || !self.is_finite() {
            return *self;
        }
        let (man, exp) = if self.exp % 2 == 0 {
            (self.man, self.exp)
        } else {
            (self.man * 2.0, self.exp - 1)
        };
        Mag::norm(man.sqrt() * BUMP_UP, exp / 2)
    }

    /// Upper bound on 10^k.
    pub fn pow10_up(k: i64) -> Mag {
        let t = k as f64 * LOG2_10;
        let e = t.floor();
        Mag::norm((t - e).exp2() * BUMP_LOG_UP, e as i64)
    }

    /// Lower bound on 10^k.
    pub fn pow10_down(k: i64) -> Mag {
        let t = k as f64 * LOG2_10;
        let e = t.floor();
        Mag::norm((t - e).exp2() * BUMP_LOG_DOWN, e as i64)
    }

    /// Upper bound on e^self - 1 (used for exp radius propagation).
    pub fn expm1_up(&self) -> Mag {
        if self.is_zero() {
            return Mag::ZERO;
        }
        if !self.is_finite() || self.exp > 40 {
            return Mag::inf();
        }
        if self.exp <= 0 {
            // x <= 1: e^x - 1 <= x * (e - 1) < 2x.
            return self.mul_2exp(1);
        }
        // Crude but safe: e^x <= 2^(ceil(x * log2 e)).
        let bound = (self.to_f64_up() * std::f64::consts::LOG2_E).ceil();
        Mag::pow2(bound as i64 + 1)
    }

    /// Upper bound on self^(1/n) for n >= 1.
    pub fn root_up(&self, n: u32) -> Mag {
        if self.is_zero() || !self.is_finite() || n == 1 {
            return *self;
        }
        let l = self.log2_approx() / n as f64;
        let e = l.floor();
        Mag::norm((l - e).exp2() * BUMP_LOG_UP, e as i64)
    }

    /// Compact scientific-notation rendering, rounded up (4 significant digits).
    pub fn to_decimal_up(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        if !self.is_finite() {
            return "inf".to_string();
        }
        let l2 = self.log2_approx();
        let e10 = (l2 / LOG2_10).floor() as i64;
        let mut mant10 = (l2 - e10 as f64 * LOG2_10).exp2() * BUMP_LOG_UP;
        let mut e10 = e10;
        // mant10 in [1, 10) up to drift; renormalize.
        while mant10 >= 10.0 {
            mant10 /= 10.0;
            e10 += 1;
        }
        while mant10 < 1.0 {
            mant10 *= 10.0;
            e10 -= 1;
        }
        let scaled = (mant10 * 1000.0).ceil() + 1.0;
        if scaled >= 10000.0 {
            format!("1.000e{}", e10 + 1)
        } else {
            format!("{:.3}e{}", scaled / 1000.0, e10)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn add_is_upper_bound() {
        let a = Mag::from_f64_up(1.5);
        let b = Mag::from_f64_up(2.25);
        let s = a.add_up(&b);
        assert!(s.to_f64_up() >= 3.75);
        assert!(s.to_f64_up() < 3.7501);
    }

    #[test]
    fn huge_gap_add_keeps_dominant_term() {
        let a = Mag::pow2(1000);
        let b = Mag::pow2(-1000);
        let s = a.add_up(&b);
        assert!(s.cmp(&Mag::pow2(1000)) != Ordering::Less);
        assert!(s.cmp(&Mag::pow2(1001)) == Ordering::Less);
    }

    #[test]
    fn mul_saturates_to_inf() {
        let a = Mag { man: 0.75, exp: i64::MAX / 2 + 10 };
        let c = a.mul_up(&a);
        assert!(!c.is_finite());
    }

    #[test]
    fn pow10_brackets() {
        let up = Mag::pow10_up(-30);
        let down = Mag::pow10_down(-30);
        assert!(down.cmp(&up) == Ordering::Less);
        let l = up.log2_approx();
        assert!((l - (-30.0 * LOG2_10)).abs() < 1e-6);
    }

    #[test]
    fn decimal_rendering_rounds_up() {
        let m = Mag::from_f64_up(0.001234);
        let s = m.to_decimal_up();
        assert!(s.starts_with("1.23") || s.starts_with("1.24"));
        assert!(s.ends_with("e-3"));
    }
}
