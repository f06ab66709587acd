use crate::{max_diff, measured, rng, Check};
use maass_core::boundaryact::{prs_rep_apply, BoundaryFunction, Interval};
use maass_core::covergroup::{kappa_tilde_pi, sigma_tilde, tau_tilde, CoverElement, Mat2, SL2Z};
use maass_core::linalg::{max_abs, CMatrix, CVector};
use maass_core::multipliers::{
    balanced_probe, rho_am, rho_am_variant, v_k_eta_quotient, v_k_word, Character, RhoSign, UnitaryRep,
};
use maass_core::{c64, Result, C64, I};
use rand::Rng;
use std::f64::consts::PI;

/// A product of `1..=max_len` letters from `T, T^-1, S, -I`.
pub(crate) fn random_word(r: &mut impl Rng, max_len: usize) -> SL2Z {
    let len = r.random_range(1..=max_len);
    (0..len).fold(SL2Z::IDENTITY, |acc, _| {
        acc * match r.random_range(0..4) {
            0 => SL2Z::T,
            1 => SL2Z::t_pow(-1),
            2 => SL2Z::S,
            _ => SL2Z::NEG_IDENTITY,
        }
    })
}

pub(crate) fn cover() -> Vec<Check> {
    let (s, t) = (sigma_tilde(), tau_tilde());
    let same = |name: &str, x: CoverElement, y: CoverElement| {
        Check::exact(format!("{name}: winding {} vs {}", x.winding, y.winding), x == y)
    };
    vec![
        same("sigma^4 = kappa(-2 pi)", s.pow(4), kappa_tilde_pi(-2)),
        same("sigma^2 tau = tau sigma^2", s.pow(2) * t, t * s.pow(2)),
        same("(tau sigma)^3 = sigma^2", (t * s).pow(3), s.pow(2)),
        Check::exact("sigma^4 projects to the identity", s.pow(4).pr() == Mat2::IDENTITY),
    ]
}

pub(crate) fn multipliers() -> Vec<Check> {
    let mut r = rng(2);
    let words: Vec<SL2Z> = (0..50).map(|_| random_word(&mut r, 8)).collect();
    let probes: Vec<C64> = (0..20).map(|_| c64(r.random_range(-0.5..0.5), r.random_range(0.8..1.5))).collect();
    let mut out = Vec::new();
    for k in [0.0, 0.5, 1.3] {
        let run = || -> Result<(f64, f64)> {
            let (mut spread, mut mismatch) = (0.0f64, 0.0f64);
            for g in &words {
                let word = v_k_word(g, k);
                let vals = probes
                    .iter()
                    .map(|&tau| v_k_eta_quotient(g, k, balanced_probe(g, tau)))
                    .collect::<Result<Vec<_>>>()?;
                for v in &vals {
                    spread = spread.max((v - vals[0]).norm());
                    mismatch = mismatch.max((v - word).norm());
                }
            }
            Ok((spread, mismatch))
        };
        match run() {
            Ok((spread, mismatch)) => {
                out.push(Check::below(format!("eta quotient probe independence, k={k}"), spread, 1e-10));
                out.push(Check::below(format!("eta quotient matches word value, k={k}"), mismatch, 1e-10));
            }
            Err(e) => out.push(Check::failed(format!("eta quotient, k={k}"), e)),
        }
    }
    out
}

/// `M(S) rho(S) e^{pi i/4} = e^{-pi i a/2} I`, with `M(S)` solved from theta values.
fn s_law_defect(rep: &UnitaryRep, a: i64, big_m: &CMatrix) -> f64 {
    let n = rep.dim;
    let prod = big_m * &rep.r_s * C64::from_polar(1.0, PI / 4.0);
    max_abs(&(prod - CMatrix::identity(n, n) * C64::from_polar(1.0, -PI * a as f64 / 2.0)))
}

pub(crate) fn rho() -> Vec<Check> {
    let mut out = Vec::new();
    let (mut unit, mut rel) = (0.0f64, 0.0f64);
    for m in [1u32, 2, 3, 5] {
        for a in 0..12 {
            let rep = match rho_am(a, m) {
                Ok(r) => r,
                Err(e) => {
                    out.push(Check::failed(format!("rho_({a},{m})"), e));
                    continue;
                }
            };
            unit = unit.max(rep.unitarity_residual());
            for kp in [-0.5, 0.5] {
                let (r1, r2) = rep.relation_residuals(&Character::chi(kp));
                rel = rel.max(r1).max(r2);
            }
        }
    }
    out.push(Check::below("rho unitarity, a in Z/12, m in {1,2,3,5}", unit, 1e-12));
    out.push(Check::below("rho cover relations with chi_k'", rel, 1e-12));

    let tau = c64(0.25, 0.9);
    for m in 1..=3u32 {
        let big_m = match crate::theta::s_law_matrix(m, tau) {
            Ok(x) => x,
            Err(e) => {
                out.push(Check::failed(format!("theta S-law matrix, m={m}"), e));
                continue;
            }
        };
        let (mut chosen, mut plus, mut minus) = (0.0f64, 0.0f64, f64::INFINITY);
        for a in 0..12 {
            let eval = |sign| rho_am_variant(a, m, sign).map(|r| s_law_defect(&r, a, &big_m));
            match (rho_am(a, m), eval(RhoSign::Plus), eval(RhoSign::Minus)) {
                (Ok(r), Ok(p), Ok(q)) => {
                    chosen = chosen.max(s_law_defect(&r, a, &big_m));
                    plus = plus.max(p);
                    minus = minus.min(q);
                }
                (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => {
                    out.push(Check::failed(format!("rho_({a},{m}) variants"), e));
                }
            }
        }
        out.push(Check::below(format!("selected rho(S) consistent with theta S-law, m={m}"), chosen, 1e-10));
        out.push(Check::below(format!("+ variant consistent with theta S-law, m={m}"), plus, 1e-10));
        if m > 1 {
            // the other variant must be excluded
            out.push(Check::exact(format!("- variant violates theta S-law, m={m} (defect {minus:.3e})"), minus > 1e-2));
        }
    }
    out
}

fn cayley_seed(rep: &UnitaryRep, s: C64, k: f64) -> BoundaryFunction {
    let d = rep.dim;
    BoundaryFunction::from_fn(Interval::P1, d, s, k, rep.label, move |t| {
        let w = if t.is_infinite() { c64(1.0, 0.0) } else { ((t - I) / (t + I)).powi(2) };
        (0..d).map(|l| w * c64(1.0 + l as f64, 0.5 * l as f64)).collect()
    })
}

fn rel_diff(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).norm() / (1.0 + y.norm())))
}

pub(crate) fn prs() -> Vec<Check> {
    let mut r = rng(4);
    let s = c64(0.5, 2.5);
    let mut worst = 0.0f64;
    let mut errors = Vec::new();
    for _ in 0..50 {
        let (g1, g2) = (random_word(&mut r, 6), random_word(&mut r, 6));
        let a = r.random_range(0..12);
        let m = r.random_range(1..=2);
        let k = r.random_range(-2.0..2.0);
        let t = r.random_range(-4.0..4.0);
        let run = || -> Result<f64> {
            let rep = rho_am(a, m)?;
            let phi = cayley_seed(&rep, s, k);
            let (rep1, phi1) = (rep.clone(), phi.clone());
            let after_g1 = BoundaryFunction::from_fn(Interval::P1, rep.dim, s, k, rep.label, move |x| {
                prs_rep_apply(&phi1, &g1, s, k, &rep1, x).unwrap_or_default()
            });
            let lhs = prs_rep_apply(&after_g1, &g2, s, k, &rep, t)?;
            let rhs = prs_rep_apply(&phi, &(g1 * g2), s, k, &rep, t)?;
            Ok(rel_diff(&lhs, &rhs))
        };
        match run() {
            Ok(e) => worst = worst.max(e),
            Err(e) => errors.push(e),
        }
    }
    let mut out = vec![match errors.first() {
        None => Check::below("prs composition law, 50 random pairs", worst, 1e-9),
        Some(e) => Check::failed("prs composition law", e),
    }];

    let minus_identity = || -> Result<f64> {
        let mut worst = 0.0f64;
        for (a, m, k) in [(5, 1, 0.5), (3, 2, -1.25), (0, 3, 1.7)] {
            let rep = rho_am(a, m)?;
            let expected_op = rep.eval(&SL2Z::NEG_IDENTITY).adjoint();
            for t in [-2.0, 0.4, 3.5] {
                let mut outs = Vec::new();
                for s in [c64(0.5, 2.0), c64(0.2, -1.0), c64(0.9, 7.0)] {
                    let phi = cayley_seed(&rep, s, k);
                    let got = prs_rep_apply(&phi, &SL2Z::NEG_IDENTITY, s, k, &rep, t)?;
                    let want = &expected_op * CVector::from_vec(phi.eval(t)?);
                    worst = worst.max(max_diff(&got, want.as_slice()));
                    outs.push(got);
                }
                for o in &outs[1..] {
                    worst = worst.max(max_diff(o, &outs[0]));
                }
            }
        }
        Ok(worst)
    };
    out.push(measured("-I acts through rho(-I) for every s", 1e-12, minus_identity()));
    out
}
