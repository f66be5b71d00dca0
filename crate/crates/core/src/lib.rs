//! Exact local computations for the Rankin-Selberg zeta integral attached to
//! newforms on Gamma0(q), the Fourier coefficients of such newforms at every
//! cusp, and the constant in the resulting Watson-type triple product formula.

pub mod arith;
pub mod error;
pub mod exact;

pub use error::{Error, Result};
pub mod rep;
pub mod lfactors;
pub mod rankin_selberg;
pub mod report;
pub mod cusps;
pub mod watson;
pub mod fourier;
pub mod scan;
