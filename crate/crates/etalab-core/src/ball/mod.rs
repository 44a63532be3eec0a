//! Certified arbitrary-precision complex ball arithmetic.

mod adaptive;
mod bernoulli;
mod complex;
mod functions;
mod mag;
mod rball;
mod real;

pub use adaptive::{adaptive_eval, adaptive_generic, AccuracyTarget, DEFAULT_PREC_CAP};
pub use bernoulli::bernoulli_even_exact;
pub use complex::{ball_from_decimal, ball_from_ratio, BallComplex, MAX_PREC_BITS};
pub use mag::Mag;
pub use real::Real;

pub(crate) use bernoulli::bernoulli_rball as bernoulli_internal;
pub(crate) use rball::RBall;

pub(crate) mod kernels {
    pub(crate) use super::functions::{exp_real, ln_real, pi_ball, sincos_real};
}
