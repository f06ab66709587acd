use crate::{Error, Result, C64};
use std::f64::consts::PI;

/// `ln` of `eta^{2k}(z)` as the branch `pi i k z/6 + 2k sum_n Log(1 - q^n)`.
pub fn ln_eta_pow_2k(z: C64, k: f64) -> Result<C64> {
    if !(z.im > 0.0) {
        return Err(Error::Domain(format!("eta needs Im z > 0, got {z}")));
    }
    let q = (2.0 * PI * C64::new(0.0, 1.0) * z).exp();
    let mut qn = q;
    let mut acc = C64::new(0.0, 0.0);
    while qn.norm() >= 1e-18 {
        acc += (1.0 - qn).ln();
        qn *= q;
    }
    Ok(C64::new(0.0, PI * k / 6.0) * z + 2.0 * k * acc)
}

/// `eta^{2k}(z) = e^{pi i k z/6} prod_{n >= 1} (1 - q^n)^{2k}`, principal logs per factor.
pub fn eta_pow_2k(z: C64, k: f64) -> Result<C64> {
    ln_eta_pow_2k(z, k).map(C64::exp)
}
