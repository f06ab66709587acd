use crate::{Error, Result, C64};
use std::f64::consts::PI;

/// Number of expansion terms used by the asymptotic mode by default.
pub const LERCH_DEFAULT_TERMS: usize = 8;
/// Smallest `|z|` accepted by the asymptotic mode by default.
pub const LERCH_SWITCH_RADIUS: f64 = 25.0;

const MAX_ADAPTIVE_TERMS: usize = 80;

/// Evaluation mode of the Lerch transcendent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LerchMode {
    /// Partial sum with an adaptively truncated expansion for the far tail.
    Direct,
    /// The truncated expansion at `z` with the given number of terms.
    Asymptotic { terms: usize },
}

impl Default for LerchMode {
    fn default() -> Self {
        LerchMode::Asymptotic {
            terms: LERCH_DEFAULT_TERMS,
        }
    }
}

/// Distance from 0 to the nearest singularity of `e^{t/2}/(e^t - zeta)`
/// other than `t = 0`.
fn generating_radius(zeta: C64) -> f64 {
    let frac = (zeta.arg() / (2.0 * PI)).rem_euclid(1.0);
    let d = frac.min(1.0 - frac);
    if d < 1e-15 {
        2.0 * PI
    } else {
        2.0 * PI * d
    }
}

fn is_one(zeta: C64) -> bool {
    (zeta - 1.0).norm() < 1e-15
}

/// Coefficients `C_{-1}, C_0, ..., C_{n-1}` of the expansion
/// `H(s, zeta, w + 1/2) ~ sum C_j w^{-j-s}`.
///
/// `C_j = g_j (s)_j` where `g_j` are the Laurent coefficients of
/// `e^{t/2}/(e^t - zeta)` at `t = 0`.
pub fn lerch_asymptotic_coeffs(s: C64, zeta: C64, n: usize) -> Result<Vec<C64>> {
    let len = n + 1;
    // numerator e^{t/2} and denominator e^t - zeta as power series
    let mut num = vec![C64::new(0.0, 0.0); len + 1];
    let mut den = vec![C64::new(0.0, 0.0); len + 2];
    let mut fact = 1.0;
    for j in 0..len + 2 {
        if j > 0 {
            fact *= j as f64;
        }
        if j < len + 1 {
            num[j] = C64::new(0.5f64.powi(j as i32) / fact, 0.0);
        }
        den[j] = C64::new(1.0 / fact, 0.0);
    }
    den[0] -= zeta;
    let one = is_one(zeta);
    if one {
        // e^t - 1 = t (1 + t/2 + ...); divide by t
        den.remove(0);
    }
    let mut g = vec![C64::new(0.0, 0.0); len];
    for j in 0..len {
        let mut acc = num[j];
        for i in 1..=j {
            acc -= den[i] * g[j - i];
        }
        g[j] = acc / den[0];
    }
    let mut out = Vec::with_capacity(len);
    if one {
        if (s - 1.0).norm() < 1e-12 {
            return Err(Error::Pole("Hurwitz zeta at s = 1".into()));
        }
        // 1/t term integrates to w^{1-s}/(s-1)
        out.push(g[0] / (s - 1.0));
        let mut poch = C64::new(1.0, 0.0);
        for j in 0..n {
            out.push(g[j + 1] * poch);
            poch *= s + j as f64;
        }
    } else {
        out.push(C64::new(0.0, 0.0));
        let mut poch = C64::new(1.0, 0.0);
        for j in 0..n {
            out.push(g[j] * poch);
            poch *= s + j as f64;
        }
    }
    Ok(out)
}

fn expansion(s: C64, zeta: C64, z: C64, terms: Option<usize>) -> Result<C64> {
    let w = z - 0.5;
    let ln_w = w.ln();
    let n = terms.unwrap_or(MAX_ADAPTIVE_TERMS);
    let coeffs = lerch_asymptotic_coeffs(s, zeta, n)?;
    let mut sum = C64::new(0.0, 0.0);
    let mut prev = f64::INFINITY;
    for (idx, c) in coeffs.iter().enumerate() {
        let j = idx as f64 - 1.0;
        let term = c * (-(j + s) * ln_w).exp();
        sum += term;
        if terms.is_none() && idx > 2 {
            // odd Bernoulli-type coefficients may vanish, so judge terms in pairs
            let pair = term.norm() + prev;
            if pair <= 1e-17 * sum.norm() {
                return Ok(sum);
            }
        }
        prev = term.norm();
    }
    if terms.is_none() {
        return Err(Error::Accuracy("Lerch expansion did not reach working precision".into()));
    }
    Ok(sum)
}

/// `H(s, zeta, z)` continued analytically in `s`, for `|zeta| = 1` and `Re z > 0`.
///
/// Sums terms directly until `z + m` is far enough out for the expansion to
/// converge to working precision, then adds the expansion of the tail.
pub fn lerch_continued(s: C64, zeta: C64, z: C64) -> Result<C64> {
    if !(z.re > 0.0) {
        return Err(Error::Domain(format!("Lerch transcendent needs Re z > 0, got {z}")));
    }
    if (zeta.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::Parameter("Lerch transcendent needs |zeta| = 1".into()));
    }
    let radius = generating_radius(zeta);
    let target = (100.0 + 2.0 * s.norm()) / radius + 2.0;
    let shift = (target - z.norm()).max(0.0).ceil() as usize;
    if shift > 5_000_000 {
        return Err(Error::Accuracy("zeta too close to 1 for the Lerch tail".into()));
    }
    let mut partial = C64::new(0.0, 0.0);
    let mut zn = C64::new(1.0, 0.0);
    for m in 0..shift {
        partial += zn * (-s * (z + m as f64).ln()).exp();
        zn *= zeta;
    }
    Ok(partial + zn * expansion(s, zeta, z + shift as f64, None)?)
}

/// Lerch transcendent `H(s, zeta, z) = sum_{n >= 0} zeta^n (z + n)^{-s}`.
pub fn lerch(s: C64, zeta: C64, z: C64, mode: LerchMode) -> Result<C64> {
    if !(z.re > 0.0) {
        return Err(Error::Domain(format!("Lerch transcendent needs Re z > 0, got {z}")));
    }
    if is_one(zeta) && (s - 1.0).norm() < 1e-10 {
        return Err(Error::Pole("Lerch transcendent with zeta = 1 at s = 1".into()));
    }
    match mode {
        LerchMode::Direct => {
            if !(s.re > 1.0) {
                return Err(Error::Parameter("direct Lerch summation needs Re s > 1".into()));
            }
            lerch_continued(s, zeta, z)
        }
        LerchMode::Asymptotic { terms } => {
            if z.norm() < LERCH_SWITCH_RADIUS {
                return Err(Error::Parameter(format!(
                    "asymptotic Lerch mode needs |z| >= {LERCH_SWITCH_RADIUS}"
                )));
            }
            expansion(s, zeta, z, Some(terms))
        }
    }
}
