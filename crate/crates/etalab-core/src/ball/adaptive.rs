//! Adaptive-precision driver: rerun a deterministic computation at doubling
//! working precisions until the result certifies the requested accuracy.

use super::complex::BallComplex;
use crate::error::{Error, Result};

/// Default precision cap for adaptive targets. Generous enough for every
/// experiment in the suite; a target value that is exactly zero would
/// otherwise ladder forever chasing unattainable relative accuracy.
pub const DEFAULT_PREC_CAP: u32 = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AccuracyTarget {
    /// Decimal digits of certified relative accuracy.
    pub digits: u32,
    /// Precision cap in bits.
    pub max_prec_bits: u32,
}

impl AccuracyTarget {
    pub fn new(digits: u32) -> Self {
        assert!(digits >= 1);
        AccuracyTarget { digits, max_prec_bits: DEFAULT_PREC_CAP }
    }

    pub fn with_cap(digits: u32, max_prec_bits: u32) -> Self {
        assert!(digits >= 1);
        assert!(max_prec_bits >= 64);
        AccuracyTarget { digits, max_prec_bits }
    }

    /// Starting precision: 64 + ceil(3.33 * digits) bits.
    pub fn start_prec(&self) -> u32 {
        64 + (3.33 * self.digits as f64).ceil() as u32
    }
}

/// Run `task` at doubling precisions until the returned ball certifies
/// `target.digits` of relative accuracy. Retryable failures (uncertifiable
/// pivots and the like) trigger the same retry path; hard errors abort.
pub fn adaptive_eval<F>(task: F, target: &AccuracyTarget) -> Result<BallComplex>
where
    F: Fn(u32) -> Result<BallComplex>,
{
    let mut best: Option<BallComplex> = None;
    let run = |prec: u32, best: &mut Option<BallComplex>| -> Result<Option<BallComplex>> {
        match task(prec) {
            Ok(v) => {
                if v.certifies(target.digits) {
                    return Ok(Some(v));
                }
                let better = match best {
                    None => true,
                    Some(b) => v.rad().cmp(&b.rad()) == std::cmp::Ordering::Less,
                };
                if better {
                    *best = Some(v);
                }
                Ok(None)
            }
            Err(e) if e.is_precision_retryable() => Ok(None),
            Err(e) => Err(e),
        }
    };
    let mut prec = target.start_prec().min(target.max_prec_bits);
    loop {
        if let Some(v) = run(prec, &mut best)? {
            return Ok(v);
        }
        if prec >= target.max_prec_bits {
            return Err(Error::AccuracyUnreachable { best: best.map(Box::new) });
        }
        prec = (prec * 2).min(target.max_prec_bits);
    }
}

/// Generic flavor for non-scalar results: `certify` decides when to stop.
pub fn adaptive_generic<T, F, C>(task: F, certify: C, target: &AccuracyTarget) -> Result<T>
where
    F: Fn(u32) -> Result<T>,
    C: Fn(&T) -> bool,
{
    let mut prec = target.start_prec().min(target.max_prec_bits);
    loop {
        match task(prec) {
            Ok(v) if certify(&v) => return Ok(v),
            Ok(_) => {}
            Err(e) if e.is_precision_retryable() => {}
            Err(e) => return Err(e),
        }
        if prec >= target.max_prec_bits {
            return Err(Error::AccuracyUnreachable { best: None });
        }
        prec = (prec * 2).min(target.max_prec_bits);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_third_times_three() {
        let target = AccuracyTarget::new(30);
        let v = adaptive_eval(
            |prec| {
                let third = BallComplex::from_i64(1, 0, prec)
                    .div(&BallComplex::from_i64(3, 0, prec))?;
                Ok(third.mul_i64(3))
            },
            &target,
        )
        .unwrap();
        assert!(v.certifies(30));
        assert!(v.contains(&BallComplex::from_i64(1, 0, 64)));
    }

    #[test]
    fn cap_forces_unreachable() {
        let target = AccuracyTarget::with_cap(200, 128);
        let r = adaptive_eval(
            |prec| {
                BallComplex::from_i64(1, 0, prec).div(&BallComplex::from_i64(3, 0, prec))
            },
            &target,
        );
        match r {
            Err(Error::AccuracyUnreachable { best }) => {
                assert!(best.is_some(), "diagnostic ball expected");
            }
            other => panic!("expected AccuracyUnreachable, got {other:?}"),
        }
    }
}
