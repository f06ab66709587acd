use crate::{Error, Result, C64};
use std::f64::consts::PI;

/// Location of the branch cut of `log` used for complex powers.
///
/// Both conventions cut along the negative real axis; they differ only in
/// which side the negative reals themselves are assigned to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BranchSpec {
    /// `arg` in `(-pi, pi]`.
    #[default]
    UpperClosed,
    /// `arg` in `[-pi, pi)`.
    LowerClosed,
}

/// Argument of `z` under the given convention.
pub fn arg(z: C64, spec: BranchSpec) -> f64 {
    let a = z.im.atan2(z.re);
    match spec {
        BranchSpec::UpperClosed => {
            if a == -PI {
                PI
            } else {
                a
            }
        }
        BranchSpec::LowerClosed => {
            if a == PI || (z.im == 0.0 && z.re < 0.0) {
                -PI
            } else {
                a
            }
        }
    }
}

/// Logarithm of `z` with the argument chosen by `spec`.
pub fn ln(z: C64, spec: BranchSpec) -> C64 {
    C64::new(z.norm().ln(), arg(z, spec))
}

/// `base^exp = exp(exp * log base)` with `arg base` chosen by `spec`.
pub fn cpow(base: C64, exp: C64, spec: BranchSpec) -> Result<C64> {
    if base == C64::new(0.0, 0.0) {
        if exp.re > 0.0 {
            return Ok(C64::new(0.0, 0.0));
        }
        return Err(Error::Domain(format!("0^{exp} is undefined")));
    }
    Ok((exp * ln(base, spec)).exp())
}

/// Principal-branch complex power for bases known to be nonzero.
#[inline]
pub fn cpow_principal(base: C64, exp: C64) -> C64 {
    (exp * C64::new(base.norm().ln(), base.im.atan2(base.re))).exp()
}
