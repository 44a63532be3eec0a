//! Internal real ball (midpoint + radius) used by the elementary-function
//! kernels. Not exposed outside the `ball` module; the public complex type
//! carries one combined radius instead.

use super::mag::Mag;
use super::real::Real;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub(crate) struct RBall {
    pub mid: Real,
    pub rad: Mag,
}

impl RBall {
    pub fn exact(mid: Real) -> RBall {
        RBall { mid, rad: Mag::ZERO }
    }

    pub fn zero() -> RBall {
        RBall::exact(Real::zero())
    }

    pub fn from_i64(v: i64) -> RBall {
        RBall::exact(Real::from_i64(v))
    }

    pub fn abs_up(&self) -> Mag {
        self.mid.abs_mag_up().add_up(&self.rad)
    }

    pub fn abs_down(&self) -> Mag {
        self.mid.abs_mag_down().sub_down(&self.rad)
    }

    pub fn contains_zero(&self) -> bool {
        self.abs_down().is_zero()
    }

    /// Strictly positive over the whole ball?
    pub fn is_positive(&self) -> bool {
        !self.mid.is_negative() && !self.mid.is_zero() && !self.contains_zero()
    }

    pub fn round(&self, prec: u32) -> RBall {
        let (mid, err) = self.mid.round_prec(prec);
        RBall { mid, rad: self.rad.add_up(&err) }
    }

    pub fn neg(&self) -> RBall {
        RBall { mid: self.mid.neg(), rad: self.rad }
    }

    pub fn add(&self, o: &RBall, prec: u32) -> RBall {
        let rad = self.rad.add_up(&o.rad);
        add_mid(&self.mid, &o.mid, prec, rad)
    }

    pub fn sub(&self, o: &RBall, prec: u32) -> RBall {
        self.add(&o.neg(), prec)
    }

    pub fn mul(&self, o: &RBall, prec: u32) -> RBall {
        let prop = self
            .mid
            .abs_mag_up()
            .mul_up(&o.rad)
            .add_up(&o.mid.abs_mag_up().mul_up(&self.rad))
            .add_up(&self.rad.mul_up(&o.rad));
        let (mid, err) = self.mid.mul_exact(&o.mid).round_prec(prec);
        RBall { mid, rad: prop.add_up(&err) }
    }

    pub fn mul_i64(&self, v: i64, prec: u32) -> RBall {
        let (mid, err) = self.mid.mul_i64(v).round_prec(prec);
        let rad = self.rad.mul_up(&Mag::from_u64(v.unsigned_abs())).add_up(&err);
        RBall { mid, rad }
    }

    pub fn mul_2exp(&self, e: i64) -> RBall {
        RBall { mid: self.mid.mul_2exp(e), rad: self.rad.mul_2exp(e) }
    }

    pub fn div(&self, o: &RBall, prec: u32) -> Result<RBall> {
        let den_low = o.abs_down();
        if den_low.is_zero() {
            return Err(Error::DivisorContainsZero);
        }
        let (mid, err) = self.mid.div_prec(&o.mid, prec)?;
        // |x/y - x0/y0| <= rx/|y|_low + |x0| ry / (|y0| |y|_low)
        let prop = self.rad.div_up(&den_low).add_up(
            &self
                .mid
                .abs_mag_up()
                .mul_up(&o.rad)
                .div_up(&o.mid.abs_mag_down().mul_down(&den_low)),
        );
        Ok(RBall { mid, rad: prop.add_up(&err) })
    }

    pub fn div_i64(&self, v: i64, prec: u32) -> RBall {
        debug_assert!(v != 0);
        let den = Real::from_i64(v);
        let (mid, err) = self.mid.div_prec(&den, prec).expect("nonzero");
        let rad = self.rad.div_up(&Mag::from_parts(v.unsigned_abs() as f64 * (1.0 - 4e-14), 0));
        RBall { mid, rad: rad.add_up(&err) }
    }

    /// Square root; requires a ball with non-negative midpoint. A ball whose
    /// lower bound touches zero gets the blunt enclosure [0, sqrt(up)].
    pub fn sqrt(&self, prec: u32) -> RBall {
        debug_assert!(!self.mid.is_negative());
        let low = self.abs_down();
        if low.is_zero() {
            let up = self.abs_up().sqrt_up();
            let half = up.mul_2exp(-1);
            // midpoint up/2 with radius up/2 covers [0, up].
            let (mid, err) = mag_to_real(&half, prec);
            return RBall { mid, rad: half.add_up(&err) };
        }
        let (mid, err) = self.mid.sqrt_prec(prec);
        // |sqrt x - sqrt x0| <= rad / (2 sqrt(low))
        let prop = self.rad.div_up(&low.sqrt_up().mul_2exp(1));
        RBall { mid, rad: prop.add_up(&err) }
    }
}

/// Midpoint addition with an exponent-gap guard: a far-smaller addend is
/// absorbed into the radius instead of materializing a huge shift.
pub(crate) fn add_mid(a: &Real, b: &Real, prec: u32, base_rad: Mag) -> RBall {
    let (a, b) = (a, b);
    match (a.msb(), b.msb()) {
        (None, _) => {
            let (mid, err) = b.round_prec(prec);
            RBall { mid, rad: base_rad.add_up(&err) }
        }
        (_, None) => {
            let (mid, err) = a.round_prec(prec);
            RBall { mid, rad: base_rad.add_up(&err) }
        }
        (Some(ma), Some(mb)) => {
            let gap_cap = prec as i64 + 64;
            if ma - mb > gap_cap {
                let (mid, err) = a.round_prec(prec);
                RBall { mid, rad: base_rad.add_up(&err).add_up(&b.abs_mag_up()) }
            } else if mb - ma > gap_cap {
                let (mid, err) = b.round_prec(prec);
                RBall { mid, rad: base_rad.add_up(&err).add_up(&a.abs_mag_up()) }
            } else {
                let (mid, err) = a.add_exact(b).round_prec(prec);
                RBall { mid, rad: base_rad.add_up(&err) }
            }
        }
    }
}

/// Smallest-effort conversion of a Mag into a Real plus rounding error.
pub(crate) fn mag_to_real(m: &Mag, prec: u32) -> (Real, Mag) {
    if m.is_zero() {
        return (Real::zero(), Mag::ZERO);
    }
    let l2 = m.log2_approx();
    let e = l2.floor() as i64 - 53;
    let man = ((l2 - e as f64).exp2()) as u64; // ~2^53 scale
    let r = Real::from_mant_exp(num_bigint::BigInt::from(man), e);
    let (r, err) = r.round_prec(prec);
    // Conversion slop: generous one-percent bound on top of rounding.
    (r, err.add_up(&m.mul_2exp(-6)))
}
