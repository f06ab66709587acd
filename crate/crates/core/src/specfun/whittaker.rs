use super::gamma::{gamma, rgamma};
use crate::{Error, Result, C64};

/// Largest argument at which the confluent series is used for `W` by default.
pub const WHITTAKER_SERIES_LIMIT: f64 = 30.0;

/// Which Whittaker function to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WhittakerKind {
    W,
    M,
}

/// Evaluation strategy for `W_{kappa,mu}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WhittakerMethod {
    /// Pick by argument size and parameters.
    #[default]
    Auto,
    /// Connection formula through two `M` series.
    Series,
    /// Contour integral of the Laplace-type representation.
    Integral,
    /// Large-argument asymptotic series.
    Asymptotic,
}

const GL16_X: [f64; 8] = [
    0.095_012_509_837_637_44,
    0.281_603_550_779_258_9,
    0.458_016_777_657_227_4,
    0.617_876_244_402_643_7,
    0.755_404_408_355_003,
    0.865_631_202_387_831_7,
    0.944_575_023_073_232_6,
    0.989_400_934_991_649_9,
];
const GL16_W: [f64; 8] = [
    0.189_450_610_455_068_5,
    0.182_603_415_044_923_6,
    0.169_156_519_395_002_5,
    0.149_595_988_816_576_7,
    0.124_628_971_255_533_9,
    0.095_158_511_682_492_78,
    0.062_253_523_938_647_89,
    0.027_152_459_411_754_095,
];

/// `1F1(a; b; y)` and its derivative in `y` for real `y`.
fn kummer_with_derivative(a: C64, b: C64, y: f64) -> Result<(C64, C64)> {
    let mut term = C64::new(1.0, 0.0);
    let mut sum = term;
    let mut dsum = C64::new(0.0, 0.0);
    for n in 0..10_000 {
        let nf = n as f64;
        let r = (a + nf) / ((b + nf) * (nf + 1.0));
        dsum += term * r * (nf + 1.0);
        term *= r * y;
        sum += term;
        let small = term.norm() <= 1e-17 * sum.norm() && term.norm() * (nf + 2.0) <= 1e-17 * y * dsum.norm();
        if (small && nf > y) || term == C64::new(0.0, 0.0) {
            return Ok((sum, dsum));
        }
    }
    Err(Error::Accuracy("confluent series did not converge".into()))
}

fn whittaker_m_with_derivative(kappa: f64, mu: C64, y: f64) -> Result<(C64, C64)> {
    let b = 1.0 + 2.0 * mu;
    if b.im == 0.0 && b.re <= 0.0 && b.re == b.re.round() {
        return Err(Error::Parameter("M_{kappa,mu} with 2mu a negative integer".into()));
    }
    let (f, df) = kummer_with_derivative(0.5 + mu - kappa, b, y)?;
    let pre = (-0.5 * y + (mu + 0.5) * y.ln()).exp();
    let m = pre * f;
    Ok((m, m * ((mu + 0.5) / y - 0.5) + pre * df))
}

fn near_half_integer_multiple(mu: C64) -> bool {
    let t = 2.0 * mu;
    t.im.abs() < 1e-6 && (t.re - t.re.round()).abs() < 1e-6
}

fn w_series(kappa: f64, mu: C64, y: f64) -> Result<(C64, C64)> {
    if near_half_integer_multiple(mu) {
        return Err(Error::Parameter("series connection needs 2mu outside Z".into()));
    }
    let (m1, d1) = whittaker_m_with_derivative(kappa, mu, y)?;
    let (m2, d2) = whittaker_m_with_derivative(kappa, -mu, y)?;
    let c1 = gamma(-2.0 * mu)? * rgamma(0.5 - mu - kappa);
    let c2 = gamma(2.0 * mu)? * rgamma(0.5 + mu - kappa);
    Ok((c1 * m1 + c2 * m2, c1 * d1 + c2 * d2))
}

fn w_asymptotic(kappa: f64, mu: C64, y: f64) -> Option<(C64, C64)> {
    // W = e^{-y/2} y^kappa S(y), S = sum t_n, t_n ~ y^{-n}
    let a = 0.5 + mu - kappa;
    let b = 0.5 - mu - kappa;
    let mut term = C64::new(1.0, 0.0);
    let mut sum = term;
    let mut dsum = C64::new(0.0, 0.0);
    let mut last = f64::INFINITY;
    for n in 1..200 {
        let nf = n as f64;
        term *= (a + nf - 1.0) * (b + nf - 1.0) / (-nf * y);
        let size = term.norm();
        if size > last {
            return None;
        }
        last = size;
        sum += term;
        dsum -= term * nf / y;
        if size <= 1e-17 * sum.norm() {
            let pre = (-0.5 * y).exp() * y.powf(kappa);
            let w = pre * sum;
            return Some((w, w * (kappa / y - 0.5) + pre * dsum));
        }
    }
    None
}

/// Integral of `e^{-r} r^alpha (1+r/y)^beta` and of its `y`-derivative along
/// a path from 0 that leaves through direction `dir` before running parallel
/// to the positive real axis.
fn laplace_integral(alpha: C64, beta: C64, y: f64, dir: C64, h: f64) -> Result<(C64, C64)> {
    let eps = (0.25 * y).min(0.5).min(h);
    // Taylor piece: e^{-r}(1+r/y)^beta = sum a_n r^n on |r| < y
    let mut a = vec![C64::new(0.0, 0.0); 80];
    let mut e = vec![C64::new(0.0, 0.0); 80];
    let mut p = vec![C64::new(0.0, 0.0); 80];
    e[0] = C64::new(1.0, 0.0);
    p[0] = C64::new(1.0, 0.0);
    for n in 1..80 {
        e[n] = -e[n - 1] / n as f64;
        p[n] = p[n - 1] * (beta - (n as f64 - 1.0)) / (n as f64 * y);
    }
    for n in 0..80 {
        a[n] = (0..=n).map(|j| e[j] * p[n - j]).sum();
    }
    let r_eps = dir * eps;
    let mut val = C64::new(0.0, 0.0);
    let mut dval = C64::new(0.0, 0.0);
    let ln_r = r_eps.ln();
    for (n, an) in a.iter().enumerate() {
        let ex = alpha + n as f64 + 1.0;
        if ex.norm() < 1e-12 {
            return Err(Error::Singular("Whittaker integral at a Gamma pole".into()));
        }
        let t = an * (ex * ln_r).exp() / ex;
        val += t;
        if t.norm() < 1e-18 * val.norm() && n > 8 {
            break;
        }
    }
    // y-derivative of the integrand is -beta/y^2 r e^{-r}(1+r/y)^{beta-1}
    {
        let mut q = vec![C64::new(0.0, 0.0); 80];
        q[0] = C64::new(1.0, 0.0);
        for n in 1..80 {
            q[n] = q[n - 1] * (beta - 1.0 - (n as f64 - 1.0)) / (n as f64 * y);
        }
        for n in 0..79 {
            let bn: C64 = (0..=n).map(|j| e[j] * q[n - j]).sum();
            let ex = alpha + n as f64 + 2.0;
            let t = -beta / (y * y) * bn * (ex * ln_r).exp() / ex;
            dval += t;
            if t.norm() < 1e-18 * dval.norm().max(1e-300) && n > 8 {
                break;
            }
        }
    }
    let f = |r: C64| -> (C64, C64) {
        let w = 1.0 + r / y;
        let base = (-r + alpha * r.ln() + (beta - 1.0) * w.ln()).exp();
        (base * w, base * beta * (-r / (y * y)))
    };
    let panel = |a: C64, b: C64, val: &mut C64, dval: &mut C64| {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        for i in 0..8 {
            for sgn in [-1.0, 1.0] {
                let (g, dg) = f(mid + half * (sgn * GL16_X[i]));
                *val += half * GL16_W[i] * g;
                *dval += half * GL16_W[i] * dg;
            }
        }
    };
    // graded leg from eps to h along dir
    let mut t0 = eps;
    while t0 < h {
        let t1 = (2.0 * t0).min(h).min(t0 + 2.0);
        panel(dir * t0, dir * t1, &mut val, &mut dval);
        t0 = t1;
    }
    // horizontal leg
    let start = dir * h;
    let mut x0 = 0.0;
    let mut width = 0.5_f64.max(h.min(4.0) * 0.5);
    loop {
        let x1 = x0 + width;
        let before = val;
        panel(start + x0, start + x1, &mut val, &mut dval);
        x0 = x1;
        width = (width * 1.5).min(4.0);
        if (val - before).norm() < 1e-18 * val.norm() && x0 > 4.0 {
            break;
        }
        if x0 > 2000.0 {
            return Err(Error::Accuracy("Whittaker integral tail did not decay".into()));
        }
    }
    Ok((val, dval))
}

fn w_integral(kappa: f64, mu: C64, y: f64) -> Result<(C64, C64)> {
    // pick the sign of mu making the endpoint singularity mildest
    let mu = if (mu - kappa).re >= (-mu - kappa).re { mu } else { -mu };
    let alpha = mu - kappa - 0.5;
    let beta = mu + kappa - 0.5;
    let (dir, h) = if mu.im.abs() >= 0.5 {
        (C64::new(0.0, mu.im.signum()), (2.0 * mu.im.abs()).max(1.0))
    } else {
        (C64::new(1.0, 0.0), 1.0)
    };
    let (int, dint) = laplace_integral(alpha, beta, y, dir, h)?;
    let pre = rgamma(0.5 + mu - kappa) * (-0.5 * y + kappa * y.ln()).exp();
    let w = pre * int;
    Ok((w, w * (kappa / y - 0.5) + pre * dint))
}

fn series_is_safe(mu: C64, y: f64) -> bool {
    y <= WHITTAKER_SERIES_LIMIT && y <= 2.0 * mu.im.abs() + 7.0 && !near_half_integer_multiple(mu)
}

/// `W_{kappa,mu}(y)` and `d/dy W_{kappa,mu}(y)` with an explicit method.
pub fn whittaker_w_by(method: WhittakerMethod, kappa: f64, mu: C64, y: f64) -> Result<(C64, C64)> {
    if !(y > 0.0) {
        return Err(Error::Domain(format!("Whittaker argument {y} must be positive")));
    }
    match method {
        WhittakerMethod::Series => w_series(kappa, mu, y),
        WhittakerMethod::Integral => w_integral(kappa, mu, y),
        WhittakerMethod::Asymptotic => w_asymptotic(kappa, mu, y)
            .ok_or_else(|| Error::Accuracy("asymptotic Whittaker series too coarse".into())),
        WhittakerMethod::Auto => {
            if series_is_safe(mu, y) {
                w_series(kappa, mu, y)
            } else if y > WHITTAKER_SERIES_LIMIT {
                match w_asymptotic(kappa, mu, y) {
                    Some(v) => Ok(v),
                    None => w_integral(kappa, mu, y),
                }
            } else {
                w_integral(kappa, mu, y)
            }
        }
    }
}

/// `W_{kappa,mu}(y)` together with its derivative in `y`.
pub fn whittaker_w_with_derivative(kappa: f64, mu: C64, y: f64) -> Result<(C64, C64)> {
    whittaker_w_by(WhittakerMethod::Auto, kappa, mu, y)
}

/// Whittaker function `W_{kappa,mu}(y)` or `M_{kappa,mu}(y)` for `y > 0`.
pub fn whittaker(kind: WhittakerKind, kappa: f64, mu: C64, y: f64) -> Result<C64> {
    if !(y > 0.0) {
        return Err(Error::Domain(format!("Whittaker argument {y} must be positive")));
    }
    match kind {
        WhittakerKind::W => whittaker_w_with_derivative(kappa, mu, y).map(|(w, _)| w),
        WhittakerKind::M => whittaker_m_with_derivative(kappa, mu, y).map(|(m, _)| m),
    }
}
