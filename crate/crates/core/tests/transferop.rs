use maass_core::boundaryact::{BoundaryFunction, Interval};
use maass_core::covergroup::SL2Z;
use maass_core::linalg::CVector;
use maass_core::multipliers::{multiplier, rho_am, UnitaryRep};
use maass_core::transferop::*;
use maass_core::{c64, Error, C64, I};
use proptest::prelude::*;

fn max_diff(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).norm()))
}

/// `t -> ((t - i)/(t + i))^2 w` on `P^1(R)`, with `w` a fixed vector.
fn cayley_seed(rep: &UnitaryRep, s: C64, k: f64) -> BoundaryFunction {
    let d = rep.dim;
    BoundaryFunction::from_fn(Interval::P1, d, s, k, rep.label, move |t| {
        let c = if t.is_infinite() { c64(1.0, 0.0) } else { ((t - I) / (t + I)).powi(2) };
        (0..d).map(|l| c * c64(1.0 + 0.3 * l as f64, -0.2 * l as f64)).collect()
    })
}

/// Decays like `t^{-2}` at infinity.
fn decaying_seed(rep: &UnitaryRep, s: C64, k: f64) -> BoundaryFunction {
    let d = rep.dim;
    BoundaryFunction::from_fn(Interval::P1, d, s, k, rep.label, move |t| {
        let c = if t.is_infinite() { c64(0.0, 0.0) } else { c64(1.0, 0.0) / (c64(t, 0.3) * c64(t, 0.3) + 1.0) };
        (0..d).map(|l| c * c64(0.5 + l as f64, 0.1)).collect()
    })
}

fn translate<F: Fn(f64) -> maass_core::Result<Vec<C64>>>(g: &F, p: &TransferParams, t: f64) -> Vec<C64> {
    act_fn(g, &SL2Z::T, p, t).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn parabolic_rule_matches_direct_sums(re in 2.5f64..4.0, im in -15.0f64..15.0, theta in 0.0f64..6.28, tau in 0.05f64..40.0, one in any::<bool>()) {
        let s = c64(re, im);
        let zeta = if one { c64(1.0, 0.0) } else { C64::from_polar(1.0, theta) };
        let f = |v: f64| c64(v, -1.0).powc(-s) * c64(v, 1.0).powc(-s) / (1.0 + 0.5 / v);
        let rule = ParabolicRule::new(zeta, 2.0 * s, tau).unwrap();
        let vals: Vec<C64> = rule.points.iter().map(|&v| f(v)).collect();
        let got = rule.apply(&vals).unwrap();
        let mut direct = C64::default();
        let mut zm = c64(1.0, 0.0);
        for m in 0..200_000 {
            direct += zm * f(tau + m as f64);
            zm *= zeta;
        }
        prop_assert!((got - direct).norm() < 1e-12 * (1.0 + direct.norm()), "{got} {direct}");
    }
}

#[test]
fn slow_operator_basics() {
    let rep = rho_am(1, 2).unwrap();
    let s = c64(0.5, 3.0);
    let p = TransferParams::new(s, 0.5, &rep).unwrap();
    let zero = BoundaryFunction::zero(Interval::POSITIVE, rep.dim, s, 0.5, rep.label);
    assert!(slow_apply(&zero, &p, 0.7).unwrap().iter().all(|z| z.norm() == 0.0));
    assert_eq!(three_term_residual(&zero, &p, &[0.3, 2.0]).unwrap(), 0.0);
    assert!(matches!(slow_apply(&zero, &p, -1.0), Err(Error::Domain(_))));
    assert!(matches!(slow_apply(&zero, &p, 0.0), Err(Error::Domain(_))));
    let f = cayley_seed(&rep, s, 0.5);
    let g = decaying_seed(&rep, s, 0.5);
    let (alpha, beta) = (c64(0.3, -1.2), c64(2.0, 0.5));
    let (f2, g2) = (f.clone(), g.clone());
    let combo = BoundaryFunction::from_fn(Interval::P1, rep.dim, s, 0.5, rep.label, move |t| {
        let (a, b) = (f2.eval(t).unwrap(), g2.eval(t).unwrap());
        a.iter().zip(&b).map(|(x, y)| alpha * x + beta * y).collect()
    });
    for t in [0.2, 1.0, 7.5] {
        let lhs = slow_apply(&combo, &p, t).unwrap();
        let (a, b) = (slow_apply(&f, &p, t).unwrap(), slow_apply(&g, &p, t).unwrap());
        let rhs: Vec<C64> = a.iter().zip(&b).map(|(x, y)| alpha * x + beta * y).collect();
        assert!(max_diff(&lhs, &rhs) < 1e-13);
    }
    // a generic function is far from a period function
    assert!(three_term_residual(&f, &p, &[0.3, 1.0, 4.0]).unwrap() > 1e-2);
}

#[test]
fn averages_of_zero_vanish() {
    let rep = rho_am(2, 1).unwrap();
    let s = c64(0.5, 2.0);
    let p = TransferParams::new(s, 1.0, &rep).unwrap();
    let zero = BoundaryFunction::zero(Interval::P1, rep.dim, s, 1.0, rep.label);
    for side in [Side::Plus, Side::Minus] {
        assert!(onesided_avg(&zero, side, &p, 0.4).unwrap().iter().all(|z| z.norm() == 0.0));
    }
    assert!(fast_apply(&zero, &p, 0.4).unwrap().iter().all(|z| z.norm() == 0.0));
}

#[test]
fn averages_invert_one_minus_t() {
    let cases = [
        (UnitaryRep::trivial(1), 0.0, c64(0.5, 4.0)),
        (UnitaryRep::trivial(1), 0.0, c64(0.3, 0.0)),
        (rho_am(1, 2).unwrap(), 0.5, c64(0.5, 2.5)),
        (rho_am(7, 3).unwrap(), -1.25, c64(0.8, 1.0)),
    ];
    for (rep, k, s) in cases {
        let p = TransferParams::new(s, k, &rep).unwrap();
        let f = cayley_seed(&rep, s, k);
        for (side, ts) in [(Side::Plus, [1.5, 3.0, 10.0]), (Side::Minus, [-1.5, -3.0, -10.0])] {
            let av = |w: f64| onesided_avg(&f, side, &p, w);
            for t in ts {
                let lhs: Vec<C64> = av(t).unwrap().iter().zip(&translate(&av, &p, t)).map(|(a, b)| a - b).collect();
                let err = max_diff(&lhs, &f.eval(t).unwrap());
                assert!(err < 1e-9, "{side:?} s={s} t={t}: {err:e}");
            }
        }
    }
}

#[test]
fn accelerated_average_matches_direct_summation() {
    let rep = rho_am(3, 2).unwrap();
    let (s, k) = (c64(0.7, 1.5), 0.5);
    let p = TransferParams::new(s, k, &rep).unwrap();
    let f = decaying_seed(&rep, s, k);
    let mt_inv = multiplier(&rep, k, &SL2Z::T).adjoint();
    for t in [0.4, 2.0] {
        let fast = onesided_avg(&f, Side::Plus, &p, t).unwrap();
        let mut direct = CVector::zeros(rep.dim);
        let mut power = maass_core::linalg::CMatrix::identity(rep.dim, rep.dim);
        for m in 0..200_000 {
            let mf = m as f64;
            let factor = ((t - I) / (t - I + mf)).powc(s - k / 2.0) * ((t + I) / (t + I + mf)).powc(s + k / 2.0);
            direct += &power * CVector::from_vec(f.eval(t + mf).unwrap()) * factor;
            power = &power * &mt_inv;
        }
        let err = max_diff(&fast, direct.as_slice());
        assert!(err < 1e-10, "t={t}: {err:e}");
    }
}

#[test]
fn averages_commute_with_translation() {
    let rep = rho_am(5, 2).unwrap();
    let (s, k) = (c64(0.5, 6.0), 0.75);
    let p = TransferParams::new(s, k, &rep).unwrap();
    let f = cayley_seed(&rep, s, k);
    let f_t = BoundaryFunction::from_fn(Interval::P1, rep.dim, s, k, rep.label, {
        let p = p.clone();
        let f = f.clone();
        move |w| act_fn(&|x| f.eval(x), &SL2Z::T, &p, w).unwrap()
    });
    for t in [0.5, 2.0, 9.0] {
        let av = |w: f64| onesided_avg(&f, Side::Plus, &p, w);
        let lhs = translate(&av, &p, t);
        let rhs = onesided_avg(&f_t, Side::Plus, &p, t).unwrap();
        assert!(max_diff(&lhs, &rhs) < 1e-9);
    }
}

#[test]
fn average_has_linear_growth_with_predicted_slope() {
    let rep = UnitaryRep::trivial(1);
    let s = c64(0.5, 3.0);
    let p = TransferParams::new(s, 0.0, &rep).unwrap();
    let f = cayley_seed(&rep, s, 0.0);
    let c_minus1 = f.eval(f64::INFINITY).unwrap()[0] / (2.0 * s - 1.0);
    let g = |t: f64| onesided_avg(&f, Side::Plus, &p, t).unwrap()[0] - c_minus1 * t;
    let (g50, g100, g200) = (g(50.0), g(100.0), g(200.0));
    let r1 = 2.0 * g100 - g50;
    let r2 = 2.0 * g200 - g100;
    assert!((g200 - g100).norm() < 0.6 * (g100 - g50).norm() + 1e-12);
    assert!((r1 - r2).norm() < 1e-3 * (1.0 + r2.norm()), "{r1} {r2}");
}

#[test]
fn singularity_at_one_half() {
    let rep = UnitaryRep::trivial(1);
    let s = c64(0.5, 0.0);
    let p = TransferParams::new(s, 0.0, &rep).unwrap();
    let f = cayley_seed(&rep, s, 0.0);
    assert!(matches!(onesided_avg(&f, Side::Plus, &p, 1.0), Err(Error::Singular(_))));
    let g = decaying_seed(&rep, s, 0.0);
    assert!(onesided_avg(&g, Side::Plus, &p, 1.0).is_ok());
    assert!(matches!(discretize(OperatorKind::Induced, &p, GridSpec { degree: 8 }), Err(Error::Singular(_))));
}

#[test]
fn fast_operator_inverts_against_t_prime() {
    for (rep, k, s) in [(UnitaryRep::trivial(1), 0.0, c64(0.5, 9.0)), (rho_am(1, 2).unwrap(), 0.5, c64(0.5, 2.0))] {
        let p = TransferParams::new(s, k, &rep).unwrap();
        let f = cayley_seed(&rep, s, k);
        let fast = |w: f64| fast_apply(&f, &p, w);
        for t in [0.3, 1.0, 4.0] {
            let lhs: Vec<C64> = fast(t).unwrap().iter().zip(&translate(&fast, &p, t)).map(|(a, b)| a - b).collect();
            let rhs = act_fn(&|w| f.eval(w), &SL2Z::T_PRIME, &p, t).unwrap();
            assert!(max_diff(&lhs, &rhs) < 1e-9);
            // (L_fast f - f) | (1 - T) = L_slow f - f
            let diff = |w: f64| -> maass_core::Result<Vec<C64>> {
                Ok(fast(w)?.iter().zip(&f.eval(w)?).map(|(a, b)| a - b).collect())
            };
            let lhs: Vec<C64> = diff(t).unwrap().iter().zip(&translate(&diff, &p, t)).map(|(a, b)| a - b).collect();
            let rhs: Vec<C64> = slow_apply(&f, &p, t).unwrap().iter().zip(&f.eval(t).unwrap()).map(|(a, b)| a - b).collect();
            assert!(max_diff(&lhs, &rhs) < 1e-9);
        }
    }
}

fn check_discretization(kind: OperatorKind, p: &TransferParams, f: &BoundaryFunction, ts: &[f64], degree: usize) -> f64 {
    let op = discretize(kind, p, GridSpec { degree }).unwrap();
    let image = &op.matrix * op.sample(f).unwrap();
    let mut worst = 0.0f64;
    for &t in ts {
        let approx = op.interpolate(&image, t).unwrap();
        let exact = match kind {
            OperatorKind::Slow => slow_apply(f, p, t).unwrap(),
            OperatorKind::Fast => fast_apply(f, p, t).unwrap(),
            OperatorKind::Induced => induced_apply(f, p, t).unwrap(),
        };
        worst = worst.max(max_diff(&approx, &exact));
    }
    worst
}

#[test]
fn discretizations_match_pointwise_operators() {
    let rep = rho_am(1, 1).unwrap();
    let (s, k) = (c64(0.5, 5.0), 0.5);
    let p = TransferParams::new(s, k, &rep).unwrap();
    let f = cayley_seed(&rep, s, k);
    let zero = BoundaryFunction::zero(Interval::P1, rep.dim, s, k, rep.label);
    for kind in [OperatorKind::Slow, OperatorKind::Fast, OperatorKind::Induced] {
        let op = discretize(kind, &p, GridSpec { degree: 8 }).unwrap();
        assert_eq!((&op.matrix * op.sample(&zero).unwrap()).norm(), 0.0);
    }
    let err = check_discretization(OperatorKind::Slow, &p, &f, &[0.13, 0.61, 1.7, 9.3], 24);
    assert!(err < 1e-8, "slow {err:e}");
    let err = check_discretization(OperatorKind::Fast, &p, &f, &[0.13, 0.61, 0.97], 24);
    assert!(err < 1e-8, "fast {err:e}");
    let err = check_discretization(OperatorKind::Induced, &p, &f, &[0.31, 0.77, 1.19], 32);
    assert!(err < 1e-8, "induced {err:e}");
}

#[test]
fn determinant_converges_under_degree_doubling() {
    let p = TransferParams::new(c64(0.5, 11.0), 0.0, &UnitaryRep::trivial(1)).unwrap();
    let d1 = discretize(OperatorKind::Induced, &p, GridSpec { degree: 32 }).unwrap().fredholm_det();
    let d2 = discretize(OperatorKind::Induced, &p, GridSpec { degree: 64 }).unwrap().fredholm_det();
    assert!((d1 - d2).norm() < 1e-8, "{d1} {d2}");
}

#[test]
fn scan_finds_first_odd_zero() {
    let rep = UnitaryRep::trivial(1);
    let res = det_scan(OperatorKind::Induced, 0.0, &rep, &critical_line(9.3, 9.7, 4), GridSpec { degree: 24 }).unwrap();
    assert_eq!(res.zeros.len(), 1);
    let z = &res.zeros[0];
    assert!((z.s - c64(0.5, 9.53369526135)).norm() < 1e-8, "{}", z.s);
    assert!(z.degree_check < 1e-7);
}

#[test]
fn scan_has_no_zeros_below_nine() {
    let rep = UnitaryRep::trivial(1);
    let res = det_scan(OperatorKind::Induced, 0.0, &rep, &critical_line(2.0, 6.0, 16), GridSpec { degree: 16 }).unwrap();
    assert!(res.zeros.is_empty());
    let dets: Vec<C64> = res.samples.iter().map(|s| s.det.unwrap()).collect();
    assert!(dets.iter().all(|d| d.norm() > 1e-3));
    let steps: Vec<f64> = dets.windows(2).map(|w| (w[1] - w[0]).norm()).collect();
    for i in 1..steps.len() - 1 {
        assert!(steps[i] < 10.0 * steps[i - 1].max(steps[i + 1]));
    }
}

#[test]
fn scan_flags_points_near_half_integers() {
    let rep = UnitaryRep::trivial(1);
    let path = [c64(0.5, 0.0), c64(0.5, 1e-4), c64(0.5, 2.0)];
    let res = det_scan(OperatorKind::Induced, 0.0, &rep, &path, GridSpec { degree: 8 }).unwrap();
    assert!(res.samples[0].flag.is_some() && res.samples[1].flag.is_some());
    assert!(res.samples[2].det.is_some());
    assert!((distance_to_poles(c64(-1.5, 0.0))).abs() < 1e-15);
    assert!((distance_to_poles(c64(1.5, 0.0)) - 1.0).abs() < 1e-15);
}

#[test]
fn translation_has_trivial_kernel() {
    let rep = rho_am(2, 2).unwrap();
    let p = TransferParams::new(c64(0.5, 3.0), 0.5, &rep).unwrap();
    let lt = translation_matrix(&p, GridSpec { degree: 16 }).unwrap();
    let n = lt.size();
    let m = maass_core::linalg::CMatrix::identity(n, n) - &lt.matrix;
    let sv = m.singular_values();
    let smallest = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    // no nonzero discretized function is invariant; any unit vector has image norm above
    assert!(smallest > 1e-8, "{smallest:e}");
}
