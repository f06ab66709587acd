//! Numerical toolkit for real-weight vector-valued Maass forms on `SL2(Z)`:
//! special functions, the universal cover, multiplier systems, principal
//! series actions, transfer operators, period functions and the theta
//! decomposition of Jacobi forms.

pub mod boundaryact;
pub mod cheb;
pub mod covergroup;
mod error;
pub mod jacobi;
pub mod linalg;
pub mod maass;
pub mod multipliers;
pub mod periods;
pub mod quad;
pub mod specfun;
pub mod transferop;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;

/// The imaginary unit.
pub const I: C64 = C64::new(0.0, 1.0);

/// Shorthand for building a complex number.
#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}
