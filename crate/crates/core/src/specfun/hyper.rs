use super::gamma::{digamma, rgamma};
use crate::{Error, Result, C64};

const MAX_TERMS: usize = 200_000;

fn is_nonpositive_integer(z: C64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

/// Kummer's confluent hypergeometric series `1F1(a; b; z)`.
pub fn hyp1f1(a: C64, b: C64, z: C64) -> Result<C64> {
    if is_nonpositive_integer(b) {
        return Err(Error::Parameter("1F1 with b a nonpositive integer".into()));
    }
    let mut term = C64::new(1.0, 0.0);
    let mut sum = term;
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        term *= (a + nf) / ((b + nf) * (nf + 1.0)) * z;
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() && nf > z.norm() {
            return Ok(sum);
        }
        if term == C64::new(0.0, 0.0) {
            return Ok(sum);
        }
    }
    Err(Error::Accuracy("1F1 series did not converge".into()))
}

/// Gauss series and its derivative, for `|v|` comfortably below 1.
fn gauss_series(a: C64, b: C64, c: C64, v: f64) -> Result<(C64, C64)> {
    let mut term = C64::new(1.0, 0.0);
    let mut sum = term;
    let mut dsum = C64::new(0.0, 0.0);
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        let ratio = (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0));
        // derivative of term_{n+1} v^{n+1} is (n+1) term_{n+1} v^n
        let next = term * ratio * v;
        dsum += term * ratio * (nf + 1.0);
        sum += next;
        term = next;
        if term.norm() <= 1e-17 * sum.norm() && (nf + 1.0) * term.norm() <= 1e-17 * dsum.norm().max(1e-300) {
            return Ok((sum, dsum));
        }
        if term == C64::new(0.0, 0.0) {
            return Ok((sum, dsum));
        }
    }
    Err(Error::Accuracy("2F1 series did not converge".into()))
}

/// Logarithmic connection formula for `c = a + b` around `v = 1`.
fn degenerate_near_one(a: C64, b: C64, v: f64) -> Result<(C64, C64)> {
    let w = 1.0 - v;
    let lw = w.ln();
    let pref = rgamma(a) * rgamma(b) / rgamma(a + b);
    let mut psi_a = digamma(a)?;
    let mut psi_b = digamma(b)?;
    let mut psi_1 = digamma(C64::new(1.0, 0.0))?;
    let mut d = C64::new(1.0, 0.0);
    let mut wn = 1.0;
    let mut sum = C64::new(0.0, 0.0);
    let mut dsum_w = C64::new(0.0, 0.0);
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        let h = 2.0 * psi_1 - psi_a - psi_b;
        let t = d * (h - lw) * wn;
        sum += t;
        // d/dw of d (h - ln w) w^n
        let dt = if n == 0 {
            -d / w
        } else {
            d * (nf * (h - lw) - 1.0) * wn / w
        };
        dsum_w += dt;
        if n > 2 && t.norm() <= 1e-17 * sum.norm() && dt.norm() <= 1e-17 * dsum_w.norm() {
            return Ok((pref * sum, -pref * dsum_w));
        }
        d *= (a + nf) * (b + nf) / ((nf + 1.0) * (nf + 1.0));
        psi_a += 1.0 / (a + nf);
        psi_b += 1.0 / (b + nf);
        psi_1 += 1.0 / (nf + 1.0);
        wn *= w;
    }
    Err(Error::Accuracy("logarithmic 2F1 expansion did not converge".into()))
}

/// Connection formula to `1 - v` for non-integer `c - a - b`.
fn generic_near_one(a: C64, b: C64, c: C64, v: f64) -> Result<(C64, C64)> {
    let w = 1.0 - v;
    let e = c - a - b;
    let g1 = super::gamma::gamma(c)? * super::gamma::gamma(e)? * rgamma(c - a) * rgamma(c - b);
    let g2 = super::gamma::gamma(c)? * super::gamma::gamma(-e)? * rgamma(a) * rgamma(b);
    let (f1, df1) = gauss_series(a, b, 1.0 - e, w)?;
    let (f2, df2) = gauss_series(c - a, c - b, 1.0 + e, w)?;
    let we = (e * w.ln()).exp();
    let val = g1 * f1 + g2 * we * f2;
    let dval_w = g1 * df1 + g2 * (e * we / w * f2 + we * df2);
    Ok((val, -dval_w))
}

/// Gauss hypergeometric function `2F1(a, b; c; v)` and its `v`-derivative on `[0, 1)`.
pub fn hyp2f1_with_derivative(a: C64, b: C64, c: C64, v: f64) -> Result<(C64, C64)> {
    if is_nonpositive_integer(c) {
        return Err(Error::Parameter("2F1 with c a nonpositive integer".into()));
    }
    if !(0.0..1.0).contains(&v) {
        return Err(Error::Domain(format!("2F1 argument {v} outside [0,1)")));
    }
    if v <= 0.6 {
        return gauss_series(a, b, c, v);
    }
    let e = c - a - b;
    let e_int = e.im.abs() < 1e-14 && (e.re - e.re.round()).abs() < 1e-14;
    if e_int && e.re.round() == 0.0 && !is_nonpositive_integer(a) && !is_nonpositive_integer(b) {
        degenerate_near_one(a, b, v)
    } else if !e_int && (e.im.abs() > 1e-6 || (e.re - e.re.round()).abs() > 1e-6) {
        generic_near_one(a, b, c, v)
    } else {
        gauss_series(a, b, c, v)
    }
}

/// Gauss hypergeometric function `2F1(a, b; c; v)` on `[0, 1)`.
pub fn hyp2f1(a: C64, b: C64, c: C64, v: f64) -> Result<C64> {
    hyp2f1_with_derivative(a, b, c, v).map(|(f, _)| f)
}
