//! High-precision laboratory for the Dirichlet eta function: certified ball
//! arithmetic, eta/zeta derivative evaluation, and the determinant-ratio
//! experiments built on those derivatives.

pub mod ball;
pub mod etaeval;
pub mod literal;
pub mod pointsets;
pub mod error;

pub use ball::{AccuracyTarget, BallComplex, Mag, Real};
pub use error::{Error, Result};
