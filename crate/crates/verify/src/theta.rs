use crate::{rng, Check};
use maass_core::covergroup::Mat2;
use maass_core::jacobi::{
    assemble_values, component_three_term_residuals, jacobi_period_pipeline, jacobi_slash, theta_decompose,
    theta_decompose_all, theta_eval, theta_vector, JacobiElement, JacobiFormData, ThetaIndex,
};
use maass_core::linalg::{max_abs, CMatrix, CVector};
use maass_core::maass::{EigenvalueRecord, FourierExpansion, FourierTerm};
use maass_core::multipliers::{kappa_spectrum, rho_am};
use maass_core::periods::PeriodConfig;
use maass_core::{c64, Error, Result, C64};
use rand::Rng;
use std::f64::consts::PI;

const S_MAT: Mat2 = Mat2 { a: 0.0, b: -1.0, c: 1.0, d: 0.0 };

/// `M` with `Theta|_{1/2,m} S = M Theta`, solved from values at `2m` points.
pub(crate) fn s_law_matrix(m: u32, tau: C64) -> Result<CMatrix> {
    let n = 2 * m as usize;
    let zs: Vec<C64> = (0..n).map(|i| c64(0.13 * i as f64 - 0.2, 0.05 * i as f64 - 0.1)).collect();
    let mut basis = CMatrix::zeros(n, n);
    let mut slashed = CMatrix::zeros(n, n);
    for (r, &z) in zs.iter().enumerate() {
        let th = theta_vector(m, tau, z)?;
        for c in 0..n {
            basis[(r, c)] = th[c];
            let idx = ThetaIndex::new(m, c as i64 + 1)?;
            slashed[(r, c)] = jacobi_slash(
                |t, w| theta_eval(idx, t, w).unwrap_or(C64::new(f64::NAN, f64::NAN)),
                &JacobiElement::Sl2(S_MAT),
                0.5,
                m as f64,
                tau,
                z,
            );
        }
    }
    let sol = basis.lu().solve(&slashed).ok_or_else(|| Error::Singular("theta values are degenerate".into()))?;
    Ok(sol.transpose())
}

fn s_law_closed_form(m: u32) -> CMatrix {
    let n = 2 * m as usize;
    CMatrix::from_fn(n, n, |r, c| {
        C64::from_polar(1.0 / (2.0 * m as f64).sqrt(), -PI / 4.0 - PI * ((r + 1) * (c + 1)) as f64 / m as f64)
    })
}

fn t_law_defect(m: u32, tau: C64, z: C64) -> Result<f64> {
    let mut worst = 0.0f64;
    for j in 1..=2 * m as i64 {
        let idx = ThetaIndex::new(m, j)?;
        let lhs = theta_eval(idx, tau + 1.0, z)?;
        let rhs = C64::from_polar(1.0, PI * (j * j) as f64 / (2.0 * m as f64)) * theta_eval(idx, tau, z)?;
        worst = worst.max((lhs - rhs).norm());
    }
    Ok(worst)
}

/// T-law phases and the S-law matrix identity for index `m`.
pub fn theta_checks(m: u32) -> Vec<Check> {
    let t = [(c64(0.3, 1.1), c64(0.2, 0.1)), (c64(-0.45, 0.7), c64(-0.3, 0.25))]
        .iter()
        .map(|&(tau, z)| t_law_defect(m, tau, z))
        .collect::<Result<Vec<_>>>()
        .map(|v| v.into_iter().fold(0.0, f64::max));
    let s = [c64(0.25, 0.9), c64(-0.1, 1.4)]
        .iter()
        .map(|&tau| s_law_matrix(m, tau).map(|big_m| max_abs(&(big_m - s_law_closed_form(m)))))
        .collect::<Result<Vec<_>>>()
        .map(|v| v.into_iter().fold(0.0, f64::max));
    vec![
        crate::measured(&format!("theta T-law phase, m={m}"), 1e-12, t),
        crate::measured(&format!("theta S-law matrix identity, m={m}"), 1e-10, s),
    ]
}

pub(crate) fn theta_laws() -> Vec<Check> {
    (1..=3).flat_map(theta_checks).collect()
}

/// Smooth component data that is not itself theta-structured.
fn components(m: u32, tau: C64) -> Vec<C64> {
    (1..=2 * m)
        .map(|j| (c64(0.1 * j as f64, 0.3) * tau).exp() / (1.0 + j as f64) + c64(0.0, 0.05 * j as f64))
        .collect()
}

fn roundtrip(m: u32) -> Result<(f64, f64)> {
    let mut r = rng(12 + m as u64);
    let f = move |t: C64, z: C64| assemble_values(m, &components(m, t), t, z);
    let (mut rec, mut class) = (0.0f64, 0.0f64);
    for _ in 0..20 {
        let tau = c64(r.random_range(-0.5..0.5), r.random_range(0.6..1.6));
        let parts = theta_decompose_all(f, m, tau)?;
        let exact = components(m, tau);
        rec = parts.iter().zip(&exact).fold(rec, |e, (a, b)| e.max((a - b).norm()));
        for j in 1..=2 * m as i64 {
            let a = theta_decompose(f, m, j, tau)?.f_j;
            let b = theta_decompose(f, m, j + 2 * m as i64, tau)?.f_j;
            class = class.max((a - b).norm());
        }
    }
    Ok((rec, class))
}

fn chi12(j: usize) -> f64 {
    match j % 12 {
        1 | 11 => 1.0,
        5 | 7 => -1.0,
        _ => 0.0,
    }
}

/// Index-6, weight-1/2 data `F_j = chi_12(j) u` built from an odd weight-0 form `u`.
///
/// The vector `(chi_12(j))_j` is fixed by `rho_{0,6}`, so the assembled function is a
/// Jacobi form whenever `u` is a cusp form for the full modular group.
pub fn chi12_jacobi_data(rec: &EigenvalueRecord) -> Result<JacobiFormData> {
    let rep = rho_am(0, 6)?;
    let spec = kappa_spectrum(&rep, 0.0)?;
    // undo the e^{-pi r/2} size of the Whittaker functions
    let size = (PI * rec.r / 2.0).exp();
    let w = CVector::from_iterator(12, (1..=12).map(|j| c64(size * chi12(j), 0.0)));
    let mut terms = Vec::new();
    for l in 0..12 {
        let beta = spec.vectors.column(l).dotc(&w);
        if beta.norm() < 1e-13 {
            continue;
        }
        for t in &rec.expansion.terms {
            terms.push(FourierTerm { l, n: t.n, c: t.c * beta });
        }
    }
    let comps = FourierExpansion::new(0.0, rec.s, &rep, terms)?;
    JacobiFormData::new(6, 0.5, 0, 2.0 * rec.s - 1.0, comps)
}

fn synthetic_residuals() -> Result<Vec<f64>> {
    let rec = crate::forms::odd_form().map_err(Error::Construction)?;
    let data = chi12_jacobi_data(rec)?;
    let pf = jacobi_period_pipeline(&data, &PeriodConfig::default())?;
    let ts: Vec<f64> = (0..25).map(|j| 10f64.powf(-1.5 + 3.0 * j as f64 / 24.0)).collect();
    component_three_term_residuals(&pf, &ts)
}

pub(crate) fn jacobi_roundtrip() -> Vec<Check> {
    let mut out = Vec::new();
    for m in 1..=3u32 {
        match roundtrip(m) {
            Ok((rec, class)) => {
                out.push(Check::below(format!("decompose(assemble(F)) = F, m={m}"), rec, 1e-9));
                out.push(Check::below(format!("F_j depends only on j mod 2m, m={m}"), class, 1e-10));
            }
            Err(e) => out.push(Check::failed(format!("theta decomposition, m={m}"), e)),
        }
    }
    match synthetic_residuals() {
        Ok(res) => {
            for (j, r) in res.iter().enumerate() {
                out.push(Check::below(format!("three-term residual of period component {}", j + 1), *r, 1e-5));
            }
        }
        Err(e) => out.push(Check::failed("period pipeline on synthetic index-6 data", e)),
    }
    out
}
