use crate::{max_diff, measured, rng, Check};
use maass_core::boundaryact::{BoundaryFunction, Interval};
use maass_core::covergroup::SL2Z;
use maass_core::maass::{hejhal_solve, HejhalConfig, Parity};
use maass_core::multipliers::{rho_am, UnitaryRep};
use maass_core::specfun::{lerch, LerchMode};
use maass_core::transferop::{
    act_fn, critical_line, det_scan, fast_apply, onesided_avg, slow_apply, GridSpec, OperatorKind, Side,
    TransferParams,
};
use maass_core::{c64, Result, C64, I};
use rand::Rng;
use std::f64::consts::PI;

/// `lim_{x -> 0}` of the polynomial through `(x_i, y_i)`.
fn extrapolate_to_zero(xs: &[f64], ys: &[C64]) -> C64 {
    let mut p = ys.to_vec();
    for lvl in 1..xs.len() {
        for i in 0..xs.len() - lvl {
            let (a, b) = (xs[i], xs[i + lvl]);
            p[i] = (p[i] * b - p[i + 1] * a) / (b - a);
        }
    }
    p[0]
}

/// Constant term of `z^{s-1} H(s, zeta, z)` as `z -> infinity` along the real axis.
fn linear_coefficient(s: C64, zeta: C64) -> Result<C64> {
    let zs: Vec<f64> = (0..6).map(|j| 50.0 * 2f64.powi(j)).collect();
    let vals = zs
        .iter()
        .map(|&z| Ok(lerch(s, zeta, c64(z, 0.0), LerchMode::Direct)? * ((s - 1.0) * z.ln()).exp()))
        .collect::<Result<Vec<_>>>()?;
    let xs: Vec<f64> = zs.iter().map(|z| 1.0 / z).collect();
    Ok(extrapolate_to_zero(&xs, &vals))
}

pub(crate) fn lerch_suite() -> Vec<Check> {
    let mut r = rng(5);
    let mut worst = 0.0f64;
    let mut slope = 0.0f64;
    let mut err = None;
    for _ in 0..20 {
        let s = c64(r.random_range(1.1..3.0), r.random_range(-5.0..5.0));
        let zeta = C64::from_polar(1.0, 2.0 * PI * r.random_range(0.05..0.95));
        let z = C64::from_polar(r.random_range(25.0..60.0), r.random_range(-1.0..1.0));
        let run = || -> Result<(f64, f64)> {
            let asym = lerch(s, zeta, z, LerchMode::Asymptotic { terms: 8 })?;
            let direct = lerch(s, zeta, z, LerchMode::Direct)?;
            Ok(((asym - direct).norm() / direct.norm(), linear_coefficient(s, zeta)?.norm()))
        };
        match run() {
            Ok((e, c)) => {
                worst = worst.max(e);
                slope = slope.max(c);
            }
            Err(e) => err = Some(e),
        }
    }
    if let Some(e) = err {
        return vec![Check::failed("Lerch transcendent", e)];
    }
    // control: with zeta = 1 the same extrapolation must find 1/(s-1)
    let s = c64(1.7, 2.0);
    let control = linear_coefficient(s, c64(1.0, 0.0)).map(|c| (c - 1.0 / (s - 1.0)).norm());
    vec![
        Check::below("Lerch N=8 expansion vs direct summation, |z| >= 25 (relative)", worst, 1e-10),
        Check::below("Lerch: no linear term when zeta != 1 (extrapolated)", slope, 1e-8),
        measured("Lerch: extrapolation recovers 1/(s-1) when zeta = 1", 1e-8, control),
    ]
}

fn cayley_seed(rep: &UnitaryRep, s: C64, k: f64) -> BoundaryFunction {
    let d = rep.dim;
    BoundaryFunction::from_fn(Interval::P1, d, s, k, rep.label, move |t| {
        let c = if t.is_infinite() { c64(1.0, 0.0) } else { ((t - I) / (t + I)).powi(2) };
        (0..d).map(|l| c * c64(1.0 + 0.3 * l as f64, -0.2 * l as f64)).collect()
    })
}

fn minus<F: Fn(f64) -> Result<Vec<C64>>>(g: &F, p: &TransferParams, t: f64) -> Result<Vec<C64>> {
    let a = g(t)?;
    let b = act_fn(g, &SL2Z::T, p, t)?;
    Ok(a.iter().zip(&b).map(|(x, y)| x - y).collect())
}

fn average_identity() -> Result<f64> {
    let cases = [
        (UnitaryRep::trivial(1), 0.0, c64(0.5, 4.0)),
        (UnitaryRep::trivial(1), 0.0, c64(0.3, 0.0)),
        (rho_am(1, 2)?, 0.5, c64(0.5, 2.5)),
        (rho_am(7, 3)?, -1.25, c64(0.8, 1.0)),
    ];
    let mut worst = 0.0f64;
    for (rep, k, s) in cases {
        let p = TransferParams::new(s, k, &rep)?;
        let f = cayley_seed(&rep, s, k);
        for (side, ts) in [(Side::Plus, [1.5, 3.0, 10.0]), (Side::Minus, [-1.5, -3.0, -10.0])] {
            let av = |w: f64| onesided_avg(&f, side, &p, w);
            for t in ts {
                worst = worst.max(max_diff(&minus(&av, &p, t)?, &f.eval(t)?));
            }
        }
    }
    Ok(worst)
}

fn compatibility() -> Result<f64> {
    let cases = [
        (UnitaryRep::trivial(1), 0.0, c64(0.5, 9.0)),
        (rho_am(1, 2)?, 0.5, c64(0.5, 2.0)),
        (rho_am(4, 1)?, -0.75, c64(0.7, -1.5)),
    ];
    let mut worst = 0.0f64;
    for (rep, k, s) in cases {
        let p = TransferParams::new(s, k, &rep)?;
        let f = cayley_seed(&rep, s, k);
        let fast = |w: f64| fast_apply(&f, &p, w);
        let diff = |w: f64| -> Result<Vec<C64>> { Ok(fast(w)?.iter().zip(&f.eval(w)?).map(|(a, b)| a - b).collect()) };
        for t in [0.3, 1.0, 4.0] {
            let tp = act_fn(&|w| f.eval(w), &SL2Z::T_PRIME, &p, t)?;
            worst = worst.max(max_diff(&minus(&fast, &p, t)?, &tp));
            let slow: Vec<C64> = slow_apply(&f, &p, t)?.iter().zip(&f.eval(t)?).map(|(a, b)| a - b).collect();
            worst = worst.max(max_diff(&minus(&diff, &p, t)?, &slow));
        }
    }
    Ok(worst)
}

pub(crate) fn averages() -> Vec<Check> {
    vec![
        measured("one-sided averages invert 1 - T", 1e-9, average_identity()),
        measured("slow/fast compatibility", 1e-9, compatibility()),
    ]
}

pub(crate) fn scan() -> Vec<Check> {
    let rep = UnitaryRep::trivial(1);
    let res = match det_scan(OperatorKind::Induced, 0.0, &rep, &critical_line(9.0, 14.0, 25), GridSpec { degree: 32 }) {
        Ok(r) => r,
        Err(e) => return vec![Check::failed("determinant scan", e)],
    };
    let cfg = HejhalConfig::default();
    let mut out = Vec::new();
    for (target, window, parity) in [(9.533695, (9.3, 9.8), Parity::Odd), (13.779751, (13.5, 14.0), Parity::Even)] {
        let Some(zero) = res.zeros.iter().min_by(|a, b| (a.s.im - target).abs().total_cmp(&(b.s.im - target).abs()))
        else {
            out.push(Check::failed(format!("zero near t = {target}"), "no zeros found"));
            continue;
        };
        let t = zero.s.im;
        out.push(Check::below(format!("determinant zero t = {t:.9} near {target}"), (t - target).abs(), 1e-5));
        out.push(Check::below(format!("degree doubling shift at t = {t:.9}"), zero.degree_check, 1e-7));
        out.push(measured(
            &format!("Hejhal eigenvalue agrees with t = {t:.9}"),
            1e-6,
            hejhal_solve(window, parity, &cfg).map(|rec| (rec.r - t).abs()),
        ));
    }
    out
}
