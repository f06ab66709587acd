use crate::{measured, Check};
use maass_core::maass::{hejhal_solve, laplace_residual, EigenvalueRecord, HejhalConfig, Parity};
use maass_core::multipliers::UnitaryRep;
use maass_core::periods::{
    period_transform, phi_restrict, rest_inverse, reproducing_integral, Circle, PeriodConfig, PeriodFunction,
};
use maass_core::{c64, Result, C64, I};
use std::f64::consts::PI;
use std::sync::OnceLock;

/// The first odd Maass cusp form of weight 0, computed once per process.
pub(crate) fn odd_form() -> std::result::Result<&'static EigenvalueRecord, String> {
    static CELL: OnceLock<std::result::Result<EigenvalueRecord, String>> = OnceLock::new();
    CELL.get_or_init(|| hejhal_solve((9.3, 9.8), Parity::Odd, &HejhalConfig::default()).map_err(|e| e.to_string()))
        .as_ref()
        .map_err(Clone::clone)
}

fn log_grid(n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|j| 10f64.powf(lo + (hi - lo) * j as f64 / (n - 1) as f64)).collect()
}

pub(crate) fn periods() -> Vec<Check> {
    let rec = match odd_form() {
        Ok(r) => r,
        Err(e) => return vec![Check::failed("Hejhal solve", e)],
    };
    let pf: PeriodFunction = match period_transform(&rec.expansion, &UnitaryRep::trivial(1), &PeriodConfig::default()) {
        Ok(p) => p,
        Err(e) => return vec![Check::failed("period transform", e)],
    };
    let ts = log_grid(40, -2.0, 2.0);
    vec![
        measured("three-term relation, 40 points", 1e-6, pf.three_term_residual(&ts)),
        measured("S-antisymmetry", 1e-6, pf.antisymmetry_residual(&ts)),
        Check::below("limit relation a_0 = -rho(S) a_inf", pf.limit_residual(), 1e-6),
        measured("fast transfer operator fixed point", 1e-5, pf.fast_fixed_point_residual(&ts[..12])),
    ]
}

/// `y^s` with its `d/dz` derivative.
fn ys(s: C64, z: C64) -> (C64, C64) {
    let v = c64(z.im, 0.0).powc(s);
    (v, v * s / z.im * c64(0.0, -0.5))
}

pub(crate) fn reproducing() -> Vec<Check> {
    let s = c64(0.5, 3.0);
    let u = |z: C64| ys(s, z);
    let z2 = c64(0.1, 1.0);
    let mut out = Vec::new();
    for k in [0.0, 0.7] {
        let run = |inside: bool| -> Result<f64> {
            let mut worst = 0.0f64;
            for r in [0.2, 0.3, 0.45] {
                let center = if inside { z2 } else { z2 + 0.9 };
                let v = reproducing_integral(u, k, s, &Circle { center, radius: r }, z2, 256)?;
                let err = if inside { (v / (2.0 * PI * I) - u(z2).0).norm() } else { v.norm() };
                worst = worst.max(err);
            }
            Ok(worst)
        };
        out.push(measured(&format!("reproducing formula inside, k={k}"), 1e-8, run(true)));
        out.push(measured(&format!("reproducing formula outside, k={k}"), 1e-8, run(false)));
    }
    out
}

pub(crate) fn restriction() -> Vec<Check> {
    let mut out = Vec::new();
    for (s, k) in [(c64(1.3, 0.5), 0.0), (c64(0.9, 1.0), 0.7), (c64(2.0, 0.0), 1.0)] {
        let run = || -> Result<(f64, f64)> {
            let (mut trip, mut eigen) = (0.0f64, 0.0f64);
            for n in 0..3 {
                let phi = move |t: C64| ((t - I) / (t + I)).powi(n);
                for x in [0.3, -1.2, 2.5] {
                    let got = phi_restrict(|z| rest_inverse(phi, s, k, z, 0.02), s, k, x)?;
                    trip = trip.max((got - phi(c64(x, 0.0))).norm());
                }
                let z = c64(0.4, 0.3);
                let size = rest_inverse(phi, s, k, z, 0.02)?.norm().max(1.0);
                let f = |w: C64| rest_inverse(phi, s, k, w, 0.02).unwrap_or(C64::new(f64::NAN, f64::NAN));
                let r = laplace_residual(f, k, s, z, 1e-3) / size;
                eigen = eigen.max(if r.is_nan() { f64::INFINITY } else { r });
            }
            Ok((trip, eigen))
        };
        match run() {
            Ok((trip, eigen)) => {
                out.push(Check::below(format!("rest(rest^-1 phi) = phi, s={s}, k={k}"), trip, 1e-7));
                out.push(Check::below(format!("Laplace eigen-residual of rest^-1, s={s}, k={k}"), eigen, 1e-5));
            }
            Err(e) => out.push(Check::failed(format!("restriction, s={s}, k={k}"), e)),
        }
    }
    out
}
