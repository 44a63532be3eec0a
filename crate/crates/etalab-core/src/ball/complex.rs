//! Complex balls: an exact dyadic midpoint pair plus one combined radius
//! covering both components (a disk in the complex plane). Every operation
//! returns a ball containing the exact image of the input balls.

use num_bigint::BigInt;

use super::bernoulli::bernoulli_rball;
use super::functions::{atan2_real, exp_real, ln2_ball, ln_real, pi_ball, sincos_real};
use super::mag::Mag;
use super::rball::{add_mid, RBall};
use super::real::Real;
use crate::error::{Error, Result};

/// Hard cap on working precision, in bits.
pub const MAX_PREC_BITS: u32 = 1 << 24;

#[derive(Clone, Debug)]
pub struct BallComplex {
    re: Real,
    im: Real,
    rad: Mag,
    prec: u32,
}

impl BallComplex {
    // ------------------------------------------------------------------
    // construction
    // ------------------------------------------------------------------

    pub fn zero(prec: u32) -> Self {
        BallComplex { re: Real::zero(), im: Real::zero(), rad: Mag::ZERO, prec }
    }

    pub fn one(prec: u32) -> Self {
        BallComplex::from_i64(1, 0, prec)
    }

    pub fn from_i64(re: i64, im: i64, prec: u32) -> Self {
        BallComplex {
            re: Real::from_i64(re),
            im: Real::from_i64(im),
            rad: Mag::ZERO,
            prec,
        }
    }

    pub fn from_parts(re: Real, im: Real, rad: Mag, prec: u32) -> Self {
        BallComplex { re, im, rad, prec }
    }

    pub fn from_real(re: Real, prec: u32) -> Self {
        BallComplex { re, im: Real::zero(), rad: Mag::ZERO, prec }
    }

    pub(crate) fn from_rball(r: RBall, prec: u32) -> Self {
        BallComplex { re: r.mid, im: Real::zero(), rad: r.rad, prec }
    }

    pub(crate) fn from_rballs(re: RBall, im: RBall, prec: u32) -> Self {
        BallComplex {
            re: re.mid,
            im: im.mid,
            rad: re.rad.add_up(&im.rad),
            prec,
        }
    }

    /// Parse decimal component strings at the given precision.
    pub fn parse(re: &str, im: &str, prec: u32) -> Result<Self> {
        let (r, er) = Real::parse_decimal(re, prec)?;
        let (i, ei) = Real::parse_decimal(im, prec)?;
        Ok(BallComplex { re: r, im: i, rad: er.add_up(&ei), prec })
    }

    pub fn pi(prec: u32) -> Self {
        BallComplex::from_rball(pi_ball(prec), prec)
    }

    pub fn ln2(prec: u32) -> Self {
        BallComplex::from_rball(ln2_ball(prec), prec)
    }

    /// Bernoulli number B_k (k = 0, 1, or even k >= 2; odd k >= 3 is zero).
    pub fn bernoulli(k: usize, prec: u32) -> Self {
        BallComplex::from_rball(bernoulli_rball(k, prec), prec)
    }

    // ------------------------------------------------------------------
    // accessors
    // ------------------------------------------------------------------

    pub fn re(&self) -> &Real {
        &self.re
    }

    pub fn im(&self) -> &Real {
        &self.im
    }

    pub fn rad(&self) -> Mag {
        self.rad
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn is_exact_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero() && self.rad.is_zero()
    }

    pub fn midpoint_only(&self) -> Self {
        BallComplex { re: self.re.clone(), im: self.im.clone(), rad: Mag::ZERO, prec: self.prec }
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        let (re, er) = self.re.round_prec(prec);
        let (im, ei) = self.im.round_prec(prec);
        BallComplex { re, im, rad: self.rad.add_up(&er).add_up(&ei), prec }
    }

    /// Inflate the radius (used to absorb external error terms).
    pub fn add_rad(&self, extra: Mag) -> Self {
        let mut out = self.clone();
        out.rad = out.rad.add_up(&extra);
        out
    }

    // ------------------------------------------------------------------
    // magnitude bounds and certification
    // ------------------------------------------------------------------

    pub fn abs_mid_up(&self) -> Mag {
        self.re.abs_mag_up().hypot_up(&self.im.abs_mag_up())
    }

    pub fn abs_mid_down(&self) -> Mag {
        self.re.abs_mag_down().hypot_down(&self.im.abs_mag_down())
    }

    /// Upper bound on |z| over the ball.
    pub fn abs_up(&self) -> Mag {
        self.abs_mid_up().add_up(&self.rad)
    }

    /// Lower bound on |z| over the ball.
    pub fn abs_down(&self) -> Mag {
        self.abs_mid_down().sub_down(&self.rad)
    }

    pub fn contains_zero(&self) -> bool {
        self.abs_down().is_zero()
    }

    /// rad <= 10^-digits * max(|mid|, rad), checked conservatively.
    pub fn certifies(&self, digits: u32) -> bool {
        if self.rad.is_zero() {
            return true;
        }
        let scale = self.abs_mid_down().max(&self.rad);
        let bound = Mag::pow10_down(-(digits as i64)).mul_down(&scale);
        self.rad.cmp(&bound) != std::cmp::Ordering::Greater
    }

    /// Certified decimal digits of relative accuracy (for display).
    pub fn accuracy_digits(&self) -> f64 {
        if self.rad.is_zero() {
            return f64::INFINITY;
        }
        let denom = self.abs_mid_down().max(&self.rad);
        -(self.rad.log2_approx() - denom.log2_approx()) / std::f64::consts::LOG2_10
    }

    /// Certified upper bound on the distance between the midpoints plus both
    /// radii -- true distance between any members of the two balls.
    pub fn dist_up(&self, o: &Self) -> Mag {
        let dr = self.re.sub_exact(&o.re).abs_mag_up();
        let di = self.im.sub_exact(&o.im).abs_mag_up();
        dr.hypot_up(&di).add_up(&self.rad).add_up(&o.rad)
    }

    /// Does this ball contain every point of `o`? (sufficient check)
    pub fn contains(&self, o: &Self) -> bool {
        let dr = self.re.sub_exact(&o.re).abs_mag_up();
        let di = self.im.sub_exact(&o.im).abs_mag_up();
        let need = dr.hypot_up(&di).add_up(&o.rad);
        need.cmp(&self.rad) != std::cmp::Ordering::Greater
    }

    /// Do the two balls certifiably intersect? (sufficient check)
    pub fn intersects(&self, o: &Self) -> bool {
        let dr = self.re.sub_exact(&o.re).abs_mag_up();
        let di = self.im.sub_exact(&o.im).abs_mag_up();
        let d = dr.hypot_up(&di);
        d.cmp(&self.rad.add_up(&o.rad)) != std::cmp::Ordering::Greater
    }

    /// Upper bound on |self - o| over both balls.
    pub fn diff_abs_up(&self, o: &Self) -> Mag {
        self.dist_up(o)
    }

    /// Lower bound on |self - o| over both balls.
    pub fn diff_abs_down(&self, o: &Self) -> Mag {
        let dr = self.re.sub_exact(&o.re);
        let di = self.im.sub_exact(&o.im);
        let d = dr.abs_mag_down().hypot_down(&di.abs_mag_down());
        d.sub_down(&self.rad).sub_down(&o.rad)
    }

    // ------------------------------------------------------------------
    // arithmetic
    // ------------------------------------------------------------------

    pub fn neg(&self) -> Self {
        BallComplex {
            re: self.re.neg(),
            im: self.im.neg(),
            rad: self.rad,
            prec: self.prec,
        }
    }

    pub fn conj(&self) -> Self {
        BallComplex {
            re: self.re.clone(),
            im: self.im.neg(),
            rad: self.rad,
            prec: self.prec,
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let p = self.prec.max(o.prec);
        let re = add_mid(&self.re, &o.re, p, Mag::ZERO);
        let im = add_mid(&self.im, &o.im, p, Mag::ZERO);
        BallComplex {
            re: re.mid,
            im: im.mid,
            rad: self
                .rad
                .add_up(&o.rad)
                .add_up(&re.rad)
                .add_up(&im.rad),
            prec: p,
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let p = self.prec.max(o.prec);
        let ac = self.re.mul_exact(&o.re);
        let bd = self.im.mul_exact(&o.im);
        let ad = self.re.mul_exact(&o.im);
        let bc = self.im.mul_exact(&o.re);
        let re = add_mid(&ac, &bd.neg(), p, Mag::ZERO);
        let im = add_mid(&ad, &bc, p, Mag::ZERO);
        let prop = self
            .abs_mid_up()
            .mul_up(&o.rad)
            .add_up(&o.abs_mid_up().mul_up(&self.rad))
            .add_up(&self.rad.mul_up(&o.rad));
        BallComplex {
            re: re.mid,
            im: im.mid,
            rad: prop.add_up(&re.rad).add_up(&im.rad),
            prec: p,
        }
    }

    pub fn mul_i64(&self, v: i64) -> Self {
        let p = self.prec;
        let (re, er) = self.re.mul_i64(v).round_prec(p);
        let (im, ei) = self.im.mul_i64(v).round_prec(p);
        BallComplex {
            re,
            im,
            rad: self
                .rad
                .mul_up(&Mag::from_u64(v.unsigned_abs()))
                .add_up(&er)
                .add_up(&ei),
            prec: p,
        }
    }

    pub fn mul_2exp(&self, e: i64) -> Self {
        BallComplex {
            re: self.re.mul_2exp(e),
            im: self.im.mul_2exp(e),
            rad: self.rad.mul_2exp(e),
            prec: self.prec,
        }
    }

    /// Multiply by a real ball scalar.
    pub(crate) fn mul_rball(&self, s: &RBall) -> Self {
        let p = self.prec;
        let (re, er) = self.re.mul_exact(&s.mid).round_prec(p);
        let (im, ei) = self.im.mul_exact(&s.mid).round_prec(p);
        let prop = self
            .abs_mid_up()
            .mul_up(&s.rad)
            .add_up(&s.abs_up().mul_up(&self.rad));
        BallComplex { re, im, rad: prop.add_up(&er).add_up(&ei), prec: p }
    }

    pub fn inv(&self) -> Result<Self> {
        let p = self.prec;
        let mlow = self.abs_mid_down();
        if mlow.sub_down(&self.rad).is_zero() {
            return Err(Error::DivisorContainsZero);
        }
        let d = self
            .re
            .mul_exact(&self.re)
            .add_exact(&self.im.mul_exact(&self.im));
        let (qre, e1) = self.re.div_prec(&d, p + 8)?;
        let (qim, e2) = self.im.neg().div_prec(&d, p + 8)?;
        // |1/z - 1/z0| <= rad / (|z0| (|z0| - rad))
        let prop = self
            .rad
            .div_up(&mlow.mul_down(&mlow.sub_down(&self.rad)));
        Ok(BallComplex {
            re: qre,
            im: qim,
            rad: prop.add_up(&e1).add_up(&e2),
            prec: p,
        })
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        if self.is_exact_zero() && !o.contains_zero() {
            return Ok(BallComplex::zero(self.prec.max(o.prec)));
        }
        Ok(self.mul(&o.inv()?))
    }

    pub fn div_i64(&self, v: i64) -> Self {
        debug_assert!(v != 0);
        let p = self.prec;
        let den = Real::from_i64(v);
        let (re, e1) = self.re.div_prec(&den, p).expect("nonzero");
        let (im, e2) = self.im.div_prec(&den, p).expect("nonzero");
        let vlow = Mag::from_parts(v.unsigned_abs() as f64 * (1.0 - 4e-14), 0);
        BallComplex {
            re,
            im,
            rad: self.rad.div_up(&vlow).add_up(&e1).add_up(&e2),
            prec: p,
        }
    }

    pub fn pow_int(&self, n: i64) -> Result<Self> {
        if n == 0 {
            return Ok(BallComplex::one(self.prec));
        }
        let mut base = if n < 0 { self.inv()? } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc: Option<BallComplex> = None;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base),
                });
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        Ok(acc.unwrap())
    }

    // ------------------------------------------------------------------
    // elementary functions
    // ------------------------------------------------------------------

    pub fn exp(&self) -> Result<Self> {
        let p = self.prec;
        let wp = p + 16;
        let er = exp_real(&self.re, wp)?;
        let (c, s) = sincos_real(&self.im, wp)?;
        let out_re = er.mul(&c, wp);
        let out_im = er.mul(&s, wp);
        // |e^z - e^z0| <= e^(Re z0) (e^rad - 1)
        let prop = er.abs_up().mul_up(&self.rad.expm1_up());
        let (re, e1) = out_re.mid.round_prec(p);
        let (im, e2) = out_im.mid.round_prec(p);
        Ok(BallComplex {
            re,
            im,
            rad: prop
                .add_up(&out_re.rad)
                .add_up(&out_im.rad)
                .add_up(&e1)
                .add_up(&e2),
            prec: p,
        })
    }

    /// Principal-branch logarithm. Errors if the input disk touches the
    /// branch cut along the non-positive reals (which also excludes zero).
    pub fn log(&self) -> Result<Self> {
        let p = self.prec;
        let wp = p + 16;
        let re_pos = self.re.sign() > 0
            && self.re.abs_mag_down().cmp(&self.rad) == std::cmp::Ordering::Greater;
        let im_pos = self.im.sign() > 0
            && self.im.abs_mag_down().cmp(&self.rad) == std::cmp::Ordering::Greater;
        let im_neg = self.im.sign() < 0
            && self.im.abs_mag_down().cmp(&self.rad) == std::cmp::Ordering::Greater;
        if !(re_pos || im_pos || im_neg) {
            return Err(Error::LogOnBranchCut);
        }
        let h2 = RBall::exact(self.re.clone())
            .mul(&RBall::exact(self.re.clone()), wp)
            .add(&RBall::exact(self.im.clone()).mul(&RBall::exact(self.im.clone()), wp), wp);
        let h = h2.sqrt(wp);
        let mut lnh = ln_real(&h.mid, wp)?;
        lnh.rad = lnh.rad.add_up(&h.rad.div_up(&h.abs_down()));
        let arg = atan2_real(&self.im, &self.re, wp)?;
        // |log z - log z0| <= rad / (|z0| - rad) over the disk.
        let mlow = self.abs_mid_down();
        let prop = self.rad.div_up(&mlow.sub_down(&self.rad));
        let (re, e1) = lnh.mid.round_prec(p);
        let (im, e2) = arg.mid.round_prec(p);
        Ok(BallComplex {
            re,
            im,
            rad: prop
                .add_up(&lnh.rad)
                .add_up(&arg.rad)
                .add_up(&e1)
                .add_up(&e2),
            prec: p,
        })
    }

    // ------------------------------------------------------------------
    // serialization
    // ------------------------------------------------------------------

    /// Wire form "mid_re mid_im rad prec". Printed digits are chosen so a
    /// reparse yields a ball containing this one.
    pub fn to_wire(&self) -> String {
        let digits = (self.prec as f64 * 0.30103) as u32 + 4;
        let (sre, ere) = self.re.to_decimal(digits);
        let (sim, eim) = self.im.to_decimal(digits);
        let rad = self.rad.add_up(&ere).add_up(&eim);
        format!("{} {} {} {}", sre, sim, rad.to_decimal_up(), self.prec)
    }

    pub fn from_wire(s: &str) -> Result<Self> {
        let toks: Vec<&str> = s.split_whitespace().collect();
        if toks.len() != 4 {
            return Err(Error::UsageError(format!(
                "ball wire form needs 4 fields, got {}",
                toks.len()
            )));
        }
        let prec: u32 = toks[3]
            .parse()
            .map_err(|_| Error::UsageError("bad precision field".into()))?;
        let (re, er) = Real::parse_decimal(toks[0], prec)?;
        let (im, ei) = Real::parse_decimal(toks[1], prec)?;
        let rad = if toks[2] == "0" {
            Mag::ZERO
        } else if toks[2] == "inf" {
            Mag::inf()
        } else {
            let (r, e) = Real::parse_decimal(toks[2], 64)?;
            r.abs_mag_up().add_up(&e)
        };
        Ok(BallComplex { re, im, rad: rad.add_up(&er).add_up(&ei), prec })
    }

    /// Exact decimal key of the midpoint, "re,im".
    pub fn midpoint_key(&self) -> String {
        format!("{},{}", self.re.to_exact_decimal(), self.im.to_exact_decimal())
    }

    /// Human-readable rendering with at most the certified digit count.
    pub fn to_display(&self) -> String {
        let digits = if self.rad.is_zero() {
            (self.prec as f64 * 0.30103) as u32 + 2
        } else {
            self.accuracy_digits().max(1.0).min(100_000.0) as u32 + 1
        };
        let (sre, _) = self.re.to_decimal(digits.max(1));
        let (sim, _) = self.im.to_decimal(digits.max(1));
        let sign = if self.im.sign() < 0 { "" } else { "+" };
        format!("{sre}{sign}{sim}i (rad {})", self.rad.to_decimal_up())
    }
}

/// Convenience for tests and constants baked into table drivers.
pub fn ball_from_decimal(re: &str, im: &str, prec: u32) -> BallComplex {
    BallComplex::parse(re, im, prec).expect("valid decimal literals")
}

/// Exact small rational p/q as a ball.
pub fn ball_from_ratio(p: i64, q: i64, prec: u32) -> BallComplex {
    BallComplex::from_i64(p, 0, prec)
        .div(&BallComplex::from_i64(q, 0, prec))
        .expect("nonzero denominator")
}

pub(crate) fn real_from_bigint_u64(v: u64) -> Real {
    Real::from_bigint(BigInt::from(v))
}
