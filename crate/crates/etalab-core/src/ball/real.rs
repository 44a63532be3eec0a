//! Dyadic arbitrary-precision reals: `mant * 2^exp` with a `BigInt` mantissa.
//!
//! Exact additions and multiplications grow the mantissa; `round_prec`
//! truncates back to a working precision and reports the truncation error as
//! a [`Mag`]. Nothing here rounds silently: every lossy step returns its
//! error bound so the ball layer can fold it into a radius.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use std::cmp::Ordering;

use super::mag::Mag;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Real {
    mant: BigInt,
    exp: i64,
}

impl Real {
    pub fn zero() -> Real {
        Real { mant: BigInt::zero(), exp: 0 }
    }

    pub fn from_i64(v: i64) -> Real {
        Real::from_mant_exp(BigInt::from(v), 0)
    }

    pub fn from_bigint(v: BigInt) -> Real {
        Real::from_mant_exp(v, 0)
    }

    /// Exact conversion: every finite f64 is dyadic.
    pub fn from_f64_exact(v: f64) -> Real {
        debug_assert!(v.is_finite());
        if v == 0.0 {
            return Real::zero();
        }
        let bits = v.to_bits();
        let sign: i64 = if bits >> 63 == 1 { -1 } else { 1 };
        let e = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & 0xf_ffff_ffff_ffff;
        let (mant, exp) = if e == 0 {
            (frac, -1074)
        } else {
            (frac | (1 << 52), e - 1075)
        };
        Real::from_mant_exp(BigInt::from(mant as i64 * sign), exp)
    }

    /// Canonical constructor: strips trailing zero bits so equal values have
    /// equal representations (exact decimal keys rely on this).
    pub fn from_mant_exp(mant: BigInt, exp: i64) -> Real {
        if mant.is_zero() {
            return Real::zero();
        }
        match mant.trailing_zeros() {
            Some(tz) if tz > 0 => Real { mant: mant >> tz, exp: exp + tz as i64 },
            _ => Real { mant, exp },
        }
    }

    pub fn mant(&self) -> &BigInt {
        &self.mant
    }

    pub fn exp(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn bits(&self) -> u64 {
        self.mant.bits()
    }

    /// Position of the most significant bit: `2^(msb-1) <= |x| < 2^msb`.
    /// `None` for zero.
    pub fn msb(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.exp + self.mant.bits() as i64)
        }
    }

    pub fn neg(&self) -> Real {
        Real { mant: -&self.mant, exp: self.exp }
    }

    pub fn abs(&self) -> Real {
        Real { mant: self.mant.abs(), exp: self.exp }
    }

    pub fn mul_2exp(&self, e: i64) -> Real {
        if self.is_zero() {
            Real::zero()
        } else {
            Real { mant: self.mant.clone(), exp: self.exp + e }
        }
    }

    /// Truncate the mantissa to `prec` bits; error bound <= one ulp.
    pub fn round_prec(&self, prec: u32) -> (Real, Mag) {
        let bits = self.mant.bits();
        if bits <= prec as u64 {
            return (self.clone(), Mag::ZERO);
        }
        let cut = (bits - prec as u64) as i64;
        let mant = &self.mant >> cut as u64;
        let err = Mag::pow2(self.exp + cut);
        (Real::from_mant_exp(mant, self.exp + cut), err)
    }

    /// Exact sum. The caller must keep exponent gaps bounded (the ball layer
    /// absorbs far-smaller addends into the radius instead).
    pub fn add_exact(&self, o: &Real) -> Real {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.exp == o.exp {
            return Real::from_mant_exp(&self.mant + &o.mant, self.exp);
        }
        let (lo, hi) = if self.exp < o.exp { (self, o) } else { (o, self) };
        let shift = (hi.exp - lo.exp) as u64;
        Real::from_mant_exp(&lo.mant + (&hi.mant << shift), lo.exp)
    }

    pub fn sub_exact(&self, o: &Real) -> Real {
        self.add_exact(&o.neg())
    }

    pub fn mul_exact(&self, o: &Real) -> Real {
        if self.is_zero() || o.is_zero() {
            return Real::zero();
        }
        Real::from_mant_exp(&self.mant * &o.mant, self.exp + o.exp)
    }

    pub fn mul_i64(&self, v: i64) -> Real {
        if v == 0 || self.is_zero() {
            return Real::zero();
        }
        Real::from_mant_exp(&self.mant * v, self.exp)
    }

    /// `self / den` to `prec` bits; truncation error <= one ulp of the result.
    pub fn div_prec(&self, den: &Real, prec: u32) -> Result<(Real, Mag)> {
        if den.is_zero() {
            return Err(Error::DivisorContainsZero);
        }
        if self.is_zero() {
            return Ok((Real::zero(), Mag::ZERO));
        }
        let nbits = self.mant.bits() as i64;
        let dbits = den.mant.bits() as i64;
        // Shift the numerator so the quotient carries ~prec+2 significant bits.
        let shift = (prec as i64 + 2 + dbits - nbits).max(0) as u64;
        let (q, r) = num_integer::Integer::div_rem(&(&self.mant << shift), &den.mant);
        let qexp = self.exp - shift as i64 - den.exp;
        let err = if r.is_zero() { Mag::ZERO } else { Mag::pow2(qexp) };
        Ok((Real::from_mant_exp(q, qexp), err))
    }

    /// Floor square root to `prec` bits (self >= 0); error <= one ulp.
    pub fn sqrt_prec(&self, prec: u32) -> (Real, Mag) {
        debug_assert!(!self.is_negative());
        if self.is_zero() {
            return (Real::zero(), Mag::ZERO);
        }
        let bits = self.mant.bits() as i64;
        let mut shift = (2 * prec as i64 + 2 - bits).max(0);
        if (self.exp - shift) % 2 != 0 {
            shift += 1;
        }
        let m = &self.mant << shift as u64;
        let r = m.sqrt();
        let rexp = (self.exp - shift) / 2;
        (Real::from_mant_exp(r, rexp), Mag::pow2(rexp))
    }

    pub fn sign(&self) -> i32 {
        if self.mant.is_zero() {
            0
        } else if self.mant.is_negative() {
            -1
        } else {
            1
        }
    }

    /// Exact comparison. Cheap when magnitudes differ; otherwise subtracts.
    pub fn cmp_exact(&self, o: &Real) -> Ordering {
        match (self.sign(), o.sign()) {
            (a, b) if a != b => return a.cmp(&b),
            (0, 0) => return Ordering::Equal,
            _ => {}
        }
        let (ma, mb) = (self.msb().unwrap(), o.msb().unwrap());
        if ma != mb {
            let mag_ord = ma.cmp(&mb);
            return if self.sign() > 0 { mag_ord } else { mag_ord.reverse() };
        }
        self.sub_exact(o).sign().cmp(&0)
    }

    pub fn abs_mag_up(&self) -> Mag {
        if self.is_zero() {
            return Mag::ZERO;
        }
        let bits = self.mant.bits();
        if bits <= 53 {
            let m = self.mant.magnitude().to_f64().unwrap();
            return Mag::from_f64_up(m).mul_2exp(self.exp);
        }
        let cut = bits - 53;
        let top: BigInt = (self.mant.magnitude() >> cut).into();
        let m = top.to_f64().unwrap() + 1.0;
        Mag::from_f64_up(m).mul_2exp(self.exp + cut as i64)
    }

    pub fn abs_mag_down(&self) -> Mag {
        if self.is_zero() {
            return Mag::ZERO;
        }
        let bits = self.mant.bits();
        if bits <= 53 {
            let m = self.mant.magnitude().to_f64().unwrap();
            return Mag::from_parts(m * (1.0 - 4e-14), self.exp);
        }
        let cut = bits - 53;
        let top: BigInt = (self.mant.magnitude() >> cut).into();
        let m = top.to_f64().unwrap();
        Mag::from_parts(m * (1.0 - 4e-14), self.exp + cut as i64)
    }

    pub fn to_f64_approx(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits();
        let (m, e) = if bits <= 53 {
            (self.mant.to_f64().unwrap(), self.exp)
        } else {
            let cut = bits - 53;
            let top: BigInt = &self.mant >> cut;
            (top.to_f64().unwrap(), self.exp + cut as i64)
        };
        if e > 1020 {
            if m > 0.0 {
                f64::INFINITY
            } else {
                f64::NEG_INFINITY
            }
        } else if e < -1060 {
            0.0
        } else {
            m * 2f64.powi(e as i32)
        }
    }

    pub fn log2_abs_approx(&self) -> f64 {
        match self.msb() {
            None => f64::NEG_INFINITY,
            Some(_) => self.abs_mag_up().log2_approx(),
        }
    }

    // ------------------------------------------------------------------
    // decimal conversions
    // ------------------------------------------------------------------

    /// Render with `digits` significant decimal digits. Returns the string
    /// and a bound on |printed - self|.
    pub fn to_decimal(&self, digits: u32) -> (String, Mag) {
        if self.is_zero() {
            return ("0".to_string(), Mag::ZERO);
        }
        let digits = digits.max(1) as i64;
        // Decimal exponent estimate: value ~ 10^e10.
        let e10 = (self.log2_abs_approx() / LOG2_10).floor() as i64;
        // Want an integer d with self ~ d * 10^(e10 - digits + 1).
        let k = digits - 1 - e10;
        let (scaled, _exact) = self.scale_pow10(k);
        let s = render_scaled(&scaled, k);
        // Printed value differs from self by at most one ulp of the last
        // decimal place (truncation in scale_pow10) -- bound 10^-k * 2.
        let err = Mag::pow10_up(-k).mul_2exp(1);
        (s, err)
    }

    /// self * 10^k as a truncated integer (floor toward zero).
    fn scale_pow10(&self, k: i64) -> (BigInt, bool) {
        let ten = BigInt::from(10);
        if k >= 0 {
            let p = ten.pow(k as u32);
            let m = &self.mant * &p;
            if self.exp >= 0 {
                (m << self.exp as u64, true)
            } else {
                let shifted = &m >> (-self.exp) as u64;
                let exact = (&shifted << (-self.exp) as u64) == m;
                (shifted, exact)
            }
        } else {
            let p = ten.pow((-k) as u32);
            if self.exp >= 0 {
                let m = &self.mant << self.exp as u64;
                let q = &m / &p;
                let exact = &q * &p == m;
                (q, exact)
            } else {
                let m = &self.mant;
                let den = &p << (-self.exp) as u64;
                let q = m / &den;
                let exact = &q * &den == *m;
                (q, exact)
            }
        }
    }

    /// Exact decimal rendering when the exponent is small enough; otherwise a
    /// deterministic hybrid form. Used for cache keys.
    pub fn to_exact_decimal(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        if self.exp.unsigned_abs() > (1 << 22) {
            return format!("m{}e{}", self.mant, self.exp);
        }
        if self.exp >= 0 {
            return (&self.mant << self.exp as u64).to_string();
        }
        let k = (-self.exp) as u64;
        // mant * 2^-k = mant * 5^k * 10^-k, exactly.
        let five = BigInt::from(5).pow(k as u32);
        let scaled = &self.mant * five;
        render_scaled(&scaled, k as i64)
    }

    /// Parse a plain decimal literal (optional sign, digits, optional
    /// fraction, optional e-exponent) to `prec` bits. Returns the value and
    /// the parse truncation error.
    pub fn parse_decimal(s: &str, prec: u32) -> Result<(Real, Mag)> {
        let t = s.trim();
        let bad = || Error::UsageError(format!("invalid decimal literal: {s:?}"));
        if t.is_empty() {
            return Err(bad());
        }
        let (mant_part, exp_part) = match t.find(['e', 'E']) {
            Some(i) => (&t[..i], Some(&t[i + 1..])),
            None => (t, None),
        };
        let e_extra: i64 = match exp_part {
            Some(p) => p.parse().map_err(|_| bad())?,
            None => 0,
        };
        let (sign, rest) = match mant_part.strip_prefix('-') {
            Some(r) => (-1, r),
            None => (1, mant_part.strip_prefix('+').unwrap_or(mant_part)),
        };
        let (int_part, frac_part) = match rest.find('.') {
            Some(i) => (&rest[..i], &rest[i + 1..]),
            None => (rest, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        if !int_part.chars().all(|c| c.is_ascii_digit())
            || !frac_part.chars().all(|c| c.is_ascii_digit())
        {
            return Err(bad());
        }
        let digits: String = format!("{int_part}{frac_part}");
        let mant10: BigInt = digits.parse().map_err(|_| bad())?;
        let mant10 = mant10 * sign;
        let dec_exp = e_extra - frac_part.len() as i64;
        Ok(Real::from_decimal_parts(mant10, dec_exp, prec))
    }

    /// mant10 * 10^dec_exp to `prec` bits.
    pub fn from_decimal_parts(mant10: BigInt, dec_exp: i64, prec: u32) -> (Real, Mag) {
        if mant10.is_zero() {
            return (Real::zero(), Mag::ZERO);
        }
        let ten = BigInt::from(10);
        if dec_exp >= 0 {
            let v = Real::from_bigint(mant10 * ten.pow(dec_exp as u32));
            v.round_prec(prec)
        } else {
            let den = ten.pow((-dec_exp) as u32);
            let num = Real::from_bigint(mant10);
            let den = Real::from_bigint(den);
            num.div_prec(&den, prec).expect("nonzero denominator")
        }
    }
}

const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// Render `scaled * 10^-k` where `scaled` is an integer, with a decimal point.
fn render_scaled(scaled: &BigInt, k: i64) -> String {
    let neg = scaled.is_negative();
    let mut s = scaled.magnitude().to_string();
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    if k <= 0 {
        out.push_str(&s);
        out.push_str(&"0".repeat((-k) as usize));
    } else {
        let k = k as usize;
        if s.len() <= k {
            s = format!("{}{}", "0".repeat(k - s.len() + 1), s);
        }
        let point = s.len() - k;
        out.push_str(&s[..point]);
        out.push('.');
        out.push_str(&s[point..]);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_small_integers() {
        let x = Real::from_i64(-42);
        assert_eq!(x.to_exact_decimal(), "-42");
        let (r, e) = x.round_prec(8);
        assert_eq!(r, x);
        assert!(e.is_zero());
    }

    #[test]
    fn dyadic_exact_decimal() {
        // -5/2 = -2.5
        let x = Real::from_mant_exp(BigInt::from(-5), -1);
        assert_eq!(x.to_exact_decimal(), "-2.5");
        // 3/8
        let y = Real::from_mant_exp(BigInt::from(3), -3);
        assert_eq!(y.to_exact_decimal(), "0.375");
    }

    #[test]
    fn parse_then_print() {
        let (x, err) = Real::parse_decimal("17", 64).unwrap();
        assert!(err.is_zero());
        assert_eq!(x.to_exact_decimal(), "17");
        let (y, err) = Real::parse_decimal("-0.25", 64).unwrap();
        assert!(err.is_zero()); // exactly dyadic
        assert_eq!(y.to_exact_decimal(), "-0.25");
        let (z, err) = Real::parse_decimal("0.1", 64).unwrap();
        assert!(!err.is_zero());
        assert!((z.to_f64_approx() - 0.1).abs() < 1e-16);
    }

    #[test]
    fn division_error_is_one_ulp() {
        let n = Real::from_i64(1);
        let d = Real::from_i64(3);
        let (q, err) = n.div_prec(&d, 100).unwrap();
        // q + theta*err == 1/3 for |theta| <= 1: check 3q is within 3 ulps of 1.
        let back = q.mul_i64(3);
        let diff = back.sub_exact(&Real::from_i64(1)).abs();
        assert!(diff.abs_mag_up().cmp(&err.mul_2exp(2)) == std::cmp::Ordering::Less);
    }

    #[test]
    fn sqrt_is_floor() {
        let x = Real::from_i64(2);
        let (r, _) = x.sqrt_prec(80);
        let sq = r.mul_exact(&r);
        assert!(sq.cmp_exact(&x) == Ordering::Less);
        let f = r.to_f64_approx();
        assert!((f - std::f64::consts::SQRT_2).abs() < 1e-14);
    }

    #[test]
    fn msb_and_mag_bounds() {
        let x = Real::from_i64(1000);
        assert_eq!(x.msb(), Some(10)); // 512 <= 1000 < 1024
        assert!(x.abs_mag_down().to_f64_up() <= 1000.0 * (1.0001));
        assert!(x.abs_mag_up().to_f64_up() >= 1000.0);
    }
}
