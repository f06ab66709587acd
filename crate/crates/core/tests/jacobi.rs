use maass_core::covergroup::{cocycle, Mat2, SL2Z};
use maass_core::jacobi::*;
use maass_core::linalg::{CMatrix, CVector};
use maass_core::maass::{hejhal_solve, laplace_residual, EigenvalueRecord, FourierExpansion, FourierTerm, HejhalConfig, Parity};
use maass_core::multipliers::{kappa_spectrum, multiplier, rho_am, rho_am_variant, RepDescriptor, RhoSign, UnitaryRep};
use maass_core::periods::{PeriodConfig, PeriodFunction};
use maass_core::{c64, Error, C64, I};
use proptest::prelude::*;
use std::f64::consts::PI;
use std::sync::OnceLock;

const S_MAT: Mat2 = Mat2 { a: 0.0, b: -1.0, c: 1.0, d: 0.0 };
const T_MAT: Mat2 = Mat2 { a: 1.0, b: 1.0, c: 0.0, d: 1.0 };

fn sample_f(tau: C64, z: C64) -> C64 {
    (0.3 * I * tau).exp() * (z * c64(0.4, 0.1)).cos() + z * z * tau + 0.2
}

fn h(x: f64, y: f64, r: f64) -> HeisElement {
    HeisElement::new(x, y, r)
}

#[test]
fn heisenberg_group_law() {
    let a = h(0.3, -1.2, 0.7);
    assert_eq!(a * a.inverse(), HeisElement::IDENTITY);
    let c = h(0.0, 0.0, 2.5);
    assert_eq!(a * c, c * a);
    assert_eq!(h(1.0, 0.0, 0.0) * h(0.0, 1.0, 0.0), h(1.0, 1.0, 1.0));
    assert_eq!(h(0.0, 1.0, 0.0) * h(1.0, 0.0, 0.0), h(1.0, 1.0, -1.0));
    assert!(h(1.0, -2.0, 3.0).is_integral());
    assert!(!h(1.5, 0.0, 0.0).is_integral());
}

proptest! {
    #[test]
    fn heisenberg_associative_on_lattice(v in prop::collection::vec(-50i32..50, 9)) {
        let e = |i: usize| h(v[i] as f64, v[i + 1] as f64, v[i + 2] as f64);
        let (a, b, c) = (e(0), e(3), e(6));
        prop_assert_eq!((a * b) * c, a * (b * c));
    }
}

fn random_sl2(a: f64, b: f64, c: f64) -> Mat2 {
    Mat2::new(a, b, c, (1.0 + b * c) / a).unwrap()
}

fn point() -> (C64, C64) {
    (c64(0.17, 0.93), c64(0.31, -0.22))
}

#[test]
fn slash_trivial_cases() {
    let (tau, z) = point();
    let id = JacobiElement::Sl2(Mat2::IDENTITY);
    assert!((jacobi_slash(sample_f, &id, 0.7, 2.0, tau, z) - sample_f(tau, z)).norm() < 1e-15);
    let central = JacobiElement::Heis(h(0.0, 0.0, 0.37));
    let lhs = jacobi_slash(sample_f, &central, 0.7, 2.0, tau, z);
    let rhs = C64::from_polar(1.0, 2.0 * PI * 2.0 * 0.37) * sample_f(tau, z);
    assert!((lhs - rhs).norm() < 1e-14);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn slash_composes_up_to_winding(
        g1 in (0.3f64..2.0, -2.0f64..2.0, -2.0f64..2.0),
        g2 in (-2.0f64..-0.3, -2.0f64..2.0, -2.0f64..2.0),
        k in -2.0f64..2.0,
    ) {
        let (tau, z) = point();
        let (m1, m2) = (random_sl2(g1.0, g1.1, g1.2), random_sl2(g2.0, g2.1, g2.2));
        let m = 3.0;
        let inner = |t: C64, w: C64| jacobi_slash(sample_f, &JacobiElement::Sl2(m1), k, m, t, w);
        let lhs = jacobi_slash(inner, &JacobiElement::Sl2(m2), k, m, tau, z);
        let n = cocycle(&m1, &m2) as f64;
        let rhs = C64::from_polar(1.0, 2.0 * PI * k * n) * jacobi_slash(sample_f, &JacobiElement::Sl2(m1 * m2), k, m, tau, z);
        prop_assert!((lhs - rhs).norm() < 1e-10 * (1.0 + rhs.norm()), "{} vs {}", lhs, rhs);
    }

    #[test]
    fn heisenberg_slash_composes(p in prop::collection::vec(-1.5f64..1.5, 6)) {
        let (tau, z) = point();
        let (a, b) = (h(p[0], p[1], p[2]), h(p[3], p[4], p[5]));
        let m = 2.0;
        let inner = |t: C64, w: C64| jacobi_slash(sample_f, &JacobiElement::Heis(a), 0.5, m, t, w);
        let lhs = jacobi_slash(inner, &JacobiElement::Heis(b), 0.5, m, tau, z);
        let rhs = jacobi_slash(sample_f, &JacobiElement::Heis(a * b), 0.5, m, tau, z);
        prop_assert!((lhs - rhs).norm() < 1e-10 * (1.0 + rhs.norm()));
    }

    #[test]
    fn semidirect_product_relation(p in prop::collection::vec(-1.5f64..1.5, 3), g in (0.3f64..2.0, -2.0f64..2.0, -2.0f64..2.0)) {
        let (tau, z) = point();
        let hh = h(p[0], p[1], p[2]);
        let gm = random_sl2(g.0, g.1, g.2);
        let (k, m) = (0.9, 2.0);
        let via_h = |t: C64, w: C64| jacobi_slash(sample_f, &JacobiElement::Heis(hh), k, m, t, w);
        let lhs = jacobi_slash(via_h, &JacobiElement::Sl2(gm), k, m, tau, z);
        let via_g = |t: C64, w: C64| jacobi_slash(sample_f, &JacobiElement::Sl2(gm), k, m, t, w);
        let rhs = jacobi_slash(via_g, &JacobiElement::Heis(hh.conjugate_by(&gm)), k, m, tau, z);
        prop_assert!((lhs - rhs).norm() < 1e-10 * (1.0 + rhs.norm()));
    }
}

#[test]
fn theta_t_law_and_class_periodicity() {
    let (tau, z) = (c64(0.3, 1.1), c64(0.2, 0.1));
    for m in 1..=4u32 {
        for j in 1..=2 * m as i64 {
            let idx = ThetaIndex::new(m, j).unwrap();
            let lhs = theta_eval(idx, tau + 1.0, z).unwrap();
            let rhs = C64::from_polar(1.0, PI * (j * j) as f64 / (2.0 * m as f64)) * theta_eval(idx, tau, z).unwrap();
            assert!((lhs - rhs).norm() < 1e-12, "m={m} j={j}");
            assert_eq!(ThetaIndex::new(m, j + 2 * m as i64).unwrap(), idx);
            assert_eq!(ThetaIndex::new(m, j - 6 * m as i64).unwrap(), idx);
        }
    }
    assert!(ThetaIndex::new(0, 1).is_err());
}

#[test]
fn theta_matches_direct_sum() {
    let (tau, z) = (c64(-0.4, 0.35), c64(0.7, 0.3));
    for m in [1u32, 3] {
        for j in [1i64, 2, 2 * m as i64] {
            let direct: C64 = (-400i64..=400)
                .filter(|r| (r - j).rem_euclid(2 * m as i64) == 0)
                .map(|r| {
                    let r = r as f64;
                    (I * PI * tau * r * r / (2.0 * m as f64) + 2.0 * PI * I * r * z).exp()
                })
                .sum::<C64>()
                * tau.im.powf(0.25);
            let v = theta_eval(ThetaIndex::new(m, j).unwrap(), tau, z).unwrap();
            assert!((v - direct).norm() < 1e-13 * direct.norm().max(1.0), "m={m} j={j}");
        }
    }
}

/// `M` with `Theta|_{1/2,m} S = M Theta`, solved from values at `2m` points.
fn s_law_matrix(m: u32, tau: C64) -> CMatrix {
    let n = 2 * m as usize;
    let zs: Vec<C64> = (0..n).map(|i| c64(0.13 * i as f64 - 0.2, 0.05 * i as f64 - 0.1)).collect();
    let theta_at = |z: C64| theta_vector(m, tau, z).unwrap();
    let basis = CMatrix::from_fn(n, n, |r, c| theta_at(zs[r])[c]);
    let slashed = CMatrix::from_fn(n, n, |r, c| {
        let idx = ThetaIndex::new(m, c as i64 + 1).unwrap();
        jacobi_slash(|t, w| theta_eval(idx, t, w).unwrap(), &JacobiElement::Sl2(S_MAT), 0.5, m as f64, tau, zs[r])
    });
    // slashed = basis * M^T
    basis.lu().solve(&slashed).unwrap().transpose()
}

#[test]
fn theta_s_law() {
    let (tau, z) = (c64(0.3, 1.1), c64(0.2, 0.1));
    for m in 1..=3u32 {
        let mf = m as f64;
        let th = theta_vector(m, tau, z).unwrap();
        for j in 1..=2 * m as i64 {
            let idx = ThetaIndex::new(m, j).unwrap();
            let lhs = jacobi_slash(|t, w| theta_eval(idx, t, w).unwrap(), &JacobiElement::Sl2(S_MAT), 0.5, mf, tau, z);
            let rhs: C64 = th
                .iter()
                .enumerate()
                .map(|(c, v)| {
                    let jp = (c + 1) as f64;
                    C64::from_polar(1.0 / (2.0 * mf).sqrt(), -PI * j as f64 * jp / mf) * v
                })
                .sum::<C64>()
                * C64::from_polar(1.0, -PI / 4.0);
            assert!((lhs - rhs).norm() < 1e-10, "m={m} j={j}: {lhs} vs {rhs}");
        }
    }
}

#[test]
fn representation_sign_matches_theta_s_law() {
    let tau = c64(0.25, 0.9);
    for m in 1..=3u32 {
        let n = 2 * m as usize;
        let big_m = s_law_matrix(m, tau);
        let expected = CMatrix::from_fn(n, n, |r, c| {
            C64::from_polar(1.0 / (2.0 * m as f64).sqrt(), -PI / 4.0 - PI * ((r + 1) * (c + 1)) as f64 / m as f64)
        });
        assert!((&big_m - &expected).camax() < 1e-10, "m={m}");
        for a in [0i64, 5] {
            // Jacobi invariance of sum Theta_j F_j with F|S = v rho(S) F forces
            // M(S) rho(S) = e^{pi i/4} phi_a(S) v_{1/2}(S)
            let target = C64::from_polar(1.0, PI / 4.0 - PI * a as f64 / 2.0 - PI / 4.0);
            let consistent = |sign| {
                let rep = rho_am_variant(a, m, sign).unwrap();
                let prod = &big_m * &rep.r_s * C64::from_polar(1.0, PI / 4.0);
                (prod - CMatrix::identity(n, n) * target).camax() < 1e-10
            };
            let plus = consistent(RhoSign::Plus);
            let minus = consistent(RhoSign::Minus);
            assert!(plus, "m={m} a={a}");
            if m == 1 {
                assert!(minus);
            } else {
                assert!(!minus, "m={m}: both variants consistent");
            }
            let chosen = rho_am(a, m).unwrap().r_s - rho_am_variant(a, m, RhoSign::Plus).unwrap().r_s;
            assert!(chosen.camax() < 1e-15);
        }
        // the T-law is consistent as well
        let rep = rho_am(0, m).unwrap();
        let t_law = CMatrix::from_fn(n, n, |r, c| {
            if r == c {
                C64::from_polar(1.0, PI * ((r + 1) * (r + 1)) as f64 / (2.0 * m as f64))
            } else {
                c64(0.0, 0.0)
            }
        });
        let prod = &t_law * &rep.r_t;
        assert!((prod - CMatrix::identity(n, n) * C64::from_polar(1.0, PI / 12.0)).camax() < 1e-12);
    }
}

#[test]
fn heisenberg_theta() {
    let tau = c64(0.1, 0.8);
    for m in [1u32, 2] {
        for j in 1..=2 * m as i64 {
            let idx = ThetaIndex::new(m, j).unwrap();
            let plain = theta_heis(idx, theta_seed(m, tau), &HeisElement::IDENTITY).unwrap();
            assert!((plain - theta_eval(idx, tau, c64(0.0, 0.0)).unwrap()).norm() < 1e-13);
            for z in [c64(0.3, 0.2), c64(-0.7, -0.45)] {
                let a = theta_via_heis(idx, tau, z).unwrap();
                let b = theta_eval(idx, tau, z).unwrap();
                assert!((a - b).norm() < 1e-12 * b.norm().max(1.0), "m={m} j={j} z={z}");
            }
            let phi = |x: f64| c64((-3.0 * x * x).exp(), x * (-2.0 * x * x).exp());
            let base = h(0.37, -0.81, 0.12);
            let v0 = theta_heis(idx, phi, &base).unwrap();
            for lam in [h(1.0, 0.0, 0.0), h(0.0, 1.0, 0.0), h(0.0, 0.0, 1.0), h(-2.0, 3.0, 5.0)] {
                let v = theta_heis(idx, phi, &(lam * base)).unwrap();
                assert!((v - v0).norm() < 1e-12, "m={m} j={j} lambda={lam:?}");
            }
            let shifted = theta_heis(idx, phi, &(base * h(0.0, 0.0, 0.29))).unwrap();
            assert!((shifted - C64::from_polar(1.0, 2.0 * PI * m as f64 * 0.29) * v0).norm() < 1e-13);
        }
    }
    let slow = |x: f64| c64(1.0 / (1.0 + x * x), 0.0);
    assert!(matches!(
        theta_heis(ThetaIndex::new(1, 1).unwrap(), slow, &HeisElement::IDENTITY),
        Err(Error::Accuracy(_))
    ));
}

fn ok<F: Fn(C64, C64) -> C64>(f: F) -> impl Fn(C64, C64) -> maass_core::Result<C64> {
    move |t, z| Ok(f(t, z))
}

#[test]
fn decomposition_of_single_block() {
    let tau = c64(0.2, 1.3);
    let g = |t: C64| (0.5 * I * t).exp() + 0.3;
    for m in [1u32, 3] {
        for c in 1..=2 * m as i64 {
            let idx = ThetaIndex::new(m, c).unwrap();
            let f = ok(|t: C64, z: C64| theta_eval(idx, t, z).unwrap() * g(t));
            for j in 1..=2 * m as i64 {
                let comp = theta_decompose(&f, m, j, tau).unwrap();
                if j == c {
                    assert!((comp.f_j - g(tau)).norm() < 1e-12, "m={m} c={c}");
                } else {
                    assert!(comp.c_j.norm() < 1e-13 && comp.f_j.norm() < 1e-12, "m={m} c={c} j={j}");
                }
            }
        }
    }
    let zero = theta_decompose(ok(|_, _| c64(0.0, 0.0)), 2, 3, tau).unwrap();
    assert_eq!((zero.c_j, zero.f_j), (c64(0.0, 0.0), c64(0.0, 0.0)));
}

/// Arbitrary smooth component data.
fn components(m: u32, tau: C64) -> Vec<C64> {
    (1..=2 * m)
        .map(|j| (c64(0.1 * j as f64, 0.3) * tau).exp() / (1.0 + j as f64) + c64(0.0, 0.05 * j as f64))
        .collect()
}

#[test]
fn decompose_inverts_assemble() {
    let mut state = 0x2545f4914f6cdd1du64;
    let mut next = || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    for m in [1u32, 2, 3] {
        let f = ok(move |t: C64, z: C64| assemble_values(m, &components(m, t), t, z).unwrap());
        for _ in 0..20 {
            let tau = c64(next() - 0.5, 0.6 + next());
            let z = c64(next(), next() - 0.5);
            let parts = theta_decompose_all(&f, m, tau).unwrap();
            let exact = components(m, tau);
            let err = parts.iter().zip(&exact).fold(0.0f64, |e, (a, b)| e.max((a - b).norm()));
            assert!(err < 1e-9, "m={m} tau={tau}: {err:e}");
            let again = assemble_values(m, &parts, tau, z).unwrap();
            assert!((again - f(tau, z).unwrap()).norm() < 1e-9);
            for j in 1..=2 * m as i64 {
                let a = theta_decompose(&f, m, j, tau).unwrap().f_j;
                let b = theta_decompose(&f, m, j - 2 * m as i64, tau).unwrap().f_j;
                assert!((a - b).norm() < 1e-10, "m={m} j={j}");
            }
        }
    }
}

#[test]
fn decomposition_with_large_representatives() {
    // the contour for j = 5m sits far from the real axis, where the weights alone leave f64 range
    let m = 6u32;
    let tau = c64(-0.3, 1.2);
    let f = ok(move |t: C64, z: C64| assemble_values(m, &components(m, t), t, z).unwrap());
    let exact = components(m, tau);
    for j in [1i64, 11, 23, 30] {
        let got = theta_decompose(&f, m, j, tau).unwrap().f_j;
        let want = exact[(j - 1).rem_euclid(12) as usize];
        assert!((got - want).norm() < 1e-9, "j={j}: {got} vs {want}");
    }
}

#[test]
fn decomposition_detects_bad_input() {
    let tau = c64(0.1, 1.0);
    let not_holomorphic = ok(|_t: C64, z: C64| (2.0 * PI * I * z).exp() + z.im);
    assert!(matches!(theta_decompose(not_holomorphic, 1, 1, tau), Err(Error::Consistency(_))));
    let wrong_index = ok(|_t: C64, z: C64| (2.0 * PI * I * z).exp());
    assert!(matches!(theta_decompose(wrong_index, 2, 1, tau), Err(Error::Consistency(_))));
    assert!(theta_decompose(ok(|_, _| c64(1.0, 0.0)), 0, 1, tau).is_err());
}

#[test]
fn assemble_is_linear_and_single_block() {
    let (tau, z) = (c64(0.3, 0.7), c64(0.1, 0.2));
    let m = 2;
    let a = components(m, tau);
    let b: Vec<C64> = a.iter().map(|v| v * v + 1.0).collect();
    let sum: Vec<C64> = a.iter().zip(&b).map(|(x, y)| 2.0 * x - y * c64(0.0, 3.0)).collect();
    let lhs = assemble_values(m, &sum, tau, z).unwrap();
    let rhs = 2.0 * assemble_values(m, &a, tau, z).unwrap() - c64(0.0, 3.0) * assemble_values(m, &b, tau, z).unwrap();
    assert!((lhs - rhs).norm() < 1e-13);
    let mut single = vec![c64(0.0, 0.0); 4];
    single[2] = c64(1.5, -0.5);
    let v = assemble_values(m, &single, tau, z).unwrap();
    let th = theta_eval(ThetaIndex::new(m, 3).unwrap(), tau, z).unwrap();
    assert!((v - th * single[2]).norm() < 1e-15);
    assert!(assemble_values(m, &single[..3], tau, z).is_err());
}

#[test]
fn coset_average_is_equivariant() {
    // seeds killed by -I give the zero sum, so pick surviving components
    for (a, m, k, l) in [(0i64, 1u32, 0.3, 1usize), (5, 2, -0.2, 0)] {
        let rep = rho_am(a, m).unwrap();
        let avg = CosetAverage::new(&rep, k, 6.0, l, 30.0).unwrap();
        for z in [c64(0.21, 0.83), c64(-0.4, 1.3)] {
            let base = CVector::from_vec(avg.eval(z).unwrap());
            assert!(base.camax() > 1e-3, "a={a} m={m} {}", base.camax());
            for (g, gm) in [(SL2Z::T, T_MAT), (SL2Z::S, S_MAT)] {
                let w = CVector::from_vec(avg.eval(gm.act(z)).unwrap());
                let phase = C64::from_polar(1.0, -k * gm.j(z).arg());
                let expected = multiplier(&rep, k, &g) * &base;
                let err = (w * phase - expected).camax();
                assert!(err < 1e-9, "a={a} m={m} {g:?}: {err:e}");
            }
        }
    }
    assert!(CosetAverage::new(&rho_am(0, 1).unwrap(), 0.0, 1.0, 0, 10.0).is_err());
}

#[test]
fn assembled_coset_data_is_jacobi_invariant() {
    for (a, m, k) in [(0i64, 1u32, 0.8), (5, 2, 0.3), (11, 3, 1.7)] {
        let kp = k - 0.5;
        let rep = rho_am(a, m).unwrap();
        let avg = CosetAverage::new(&rep, kp, 6.0, 0, 30.0).unwrap();
        let f = |t: C64, z: C64| assemble_values(m, &avg.eval(t).unwrap(), t, z).unwrap();
        for (tau, z) in [(c64(0.21, 0.83), c64(0.1, 0.05)), (c64(-0.3, 1.2), c64(0.4, -0.2))] {
            let v = f(tau, z);
            for g in [SL2Z::T, SL2Z::S] {
                let w = jacobi_slash_twisted(f, &g, k, m as f64, a, tau, z);
                assert!((w - v).norm() < 1e-7 * v.norm().max(1.0), "a={a} m={m} {g:?}: {w} vs {v}");
            }
            let lam = h(1.0, -2.0, 3.0);
            let w = jacobi_slash(f, &JacobiElement::Heis(lam), k, m as f64, tau, z);
            assert!((w - v).norm() < 1e-9 * v.norm().max(1.0));
        }
    }
}

#[test]
fn bridge_parameters() {
    let s = c64(0.3, 4.0);
    let b = theorem_b_bridge(1, 0.5, 0, s).unwrap();
    assert_eq!(b.k_prime, 0.0);
    assert_eq!(b.s_prime, (s + 1.0) / 2.0);
    assert_eq!(b.rep, RepDescriptor::RhoAm { a: 0, m: 1 });
    assert_eq!(theorem_b_bridge(2, 1.0, 0, c64(0.0, 0.0)).unwrap().s_prime, c64(0.5, 0.0));
    assert_eq!(theorem_b_bridge(2, 1.0, -1, s).unwrap().rep, RepDescriptor::RhoAm { a: 11, m: 2 });
    assert!(theorem_b_bridge(0, 1.0, 0, s).is_err());
}

#[test]
fn period_domain_follows_the_vector_valued_condition() {
    for ki in -12..=12 {
        let k = ki as f64 / 4.0;
        for si in -7..=7 {
            let s = c64(si as f64 / 8.0, 0.0);
            let b = theorem_b_bridge(1, k, 0, s).unwrap();
            let sp = b.s_prime.re;
            let kp2 = b.k_prime / 2.0;
            let near_int = |x: f64| (x - x.round()).abs() < 1e-12;
            let direct = sp > 0.0 && sp < 1.0 && !near_int(sp - kp2) && !near_int(sp + kp2);
            assert_eq!(period_domain_admissible(k, s), direct, "k={k} s={s}");
        }
    }
    assert!(period_domain_admissible(0.5, c64(0.0, 3.0)));
}

#[test]
fn parity_condition_on_s_alone_is_not_sufficient() {
    // s = 0 is not congruent to +-3/2 mod 2, but s' = 1/2 = k'/2
    let (k, s) = (1.5, c64(0.0, 0.0));
    let b = theorem_b_bridge(1, k, 0, s).unwrap();
    assert!((b.s_prime.re - b.k_prime / 2.0).abs() < 1e-15);
    assert!(!period_domain_admissible(k, s));
}

/// Odd weight-0 cusp form tensored with the `rho_{0,6}`-invariant vector
/// `(chi_12(j))_j`, a Jacobi cusp form of weight 1/2 and index 6.
fn chi12(j: usize) -> f64 {
    match j % 12 {
        1 | 11 => 1.0,
        5 | 7 => -1.0,
        _ => 0.0,
    }
}

fn synthetic() -> &'static (EigenvalueRecord, JacobiFormData, PeriodFunction) {
    static CELL: OnceLock<(EigenvalueRecord, JacobiFormData, PeriodFunction)> = OnceLock::new();
    CELL.get_or_init(|| {
        let rec = hejhal_solve((9.3, 9.8), Parity::Odd, &HejhalConfig::default()).unwrap();
        let rep = rho_am(0, 6).unwrap();
        let spec = kappa_spectrum(&rep, 0.0).unwrap();
        // undo the e^{-pi r/2} size of the Whittaker functions
        let size = (PI * rec.r / 2.0).exp();
        let w = CVector::from_iterator(12, (1..=12).map(|j| c64(size * chi12(j), 0.0)));
        let mut terms = Vec::new();
        for l in 0..12 {
            let beta = spec.vectors.column(l).dotc(&w);
            if beta.norm() < 1e-13 {
                continue;
            }
            assert!(spec.kappas[l].abs() < 1e-12);
            for t in &rec.expansion.terms {
                terms.push(FourierTerm { l, n: t.n, c: t.c * beta });
            }
        }
        let comps = FourierExpansion::new(0.0, rec.s, &rep, terms).unwrap();
        let data = JacobiFormData::new(6, 0.5, 0, 2.0 * rec.s - 1.0, comps).unwrap();
        let pf = jacobi_period_pipeline(&data, &PeriodConfig::default()).unwrap();
        (rec, data, pf)
    })
}

fn log_grid(n: usize) -> Vec<f64> {
    (0..n).map(|j| 10f64.powf(-1.5 + 3.0 * j as f64 / (n - 1) as f64)).collect()
}

#[test]
fn synthetic_data_is_an_invariant_eigenfunction() {
    let (rec, data, _) = synthetic();
    let f = |t: C64, z: C64| assemble_jacobi(data, t, z).unwrap();
    for (tau, z) in [(c64(0.21, 0.93), c64(0.1, 0.05)), (c64(-0.35, 1.1), c64(0.4, -0.2))] {
        let v = f(tau, z);
        assert!(v.norm() > 1e-4, "{v}");
        for g in [SL2Z::T, SL2Z::S] {
            let w = jacobi_slash_twisted(f, &g, data.k, 6.0, data.a, tau, z);
            assert!((w - v).norm() < 1e-7 * v.norm().max(1.0), "{g:?}: {w} vs {v}");
        }
        let parts = theta_decompose_all(|t, w| assemble_jacobi(data, t, w), 6, tau).unwrap();
        let direct = data.component_values(tau).unwrap();
        for (p, d) in parts.iter().zip(&direct) {
            assert!((p - d).norm() < 1e-9);
        }
    }
    for j in [0usize, 4] {
        let comp = |z: C64| data.component_values(z).unwrap()[j];
        let r = laplace_residual(comp, 0.0, data.bridge().s_prime, c64(0.12, 1.05), 1e-3);
        assert!(r < 1e-5, "component {j}: {r:e}");
    }
    assert!((data.bridge().s_prime - rec.s).norm() < 1e-15);
}

#[test]
fn pipeline_on_synthetic_data() {
    let (_, _, pf) = synthetic();
    assert_eq!(pf.dim(), 12);
    let ts = log_grid(25);
    let res = component_three_term_residuals(pf, &ts).unwrap();
    assert_eq!(res.len(), 12);
    for (j, r) in res.iter().enumerate() {
        assert!(*r < 1e-5, "component {}: {r:e}", j + 1);
    }
    for &t in &[0.3, 1.7] {
        let v = pf.eval(t).unwrap();
        assert!(v[0].norm() > 1e-3);
        for (j, x) in v.iter().enumerate() {
            assert!((x - chi12(j + 1) * v[0]).norm() < 1e-12);
        }
    }
}

#[test]
fn pipeline_on_zero_data() {
    let data = JacobiFormData::zero(2, 0.5, 3, c64(0.0, 5.0)).unwrap();
    let pf = jacobi_period_pipeline(&data, &PeriodConfig::default()).unwrap();
    assert_eq!(pf.dim(), 4);
    for t in [0.2, 1.0, 5.0] {
        assert!(pf.eval(t).unwrap().iter().all(|v| v.norm() == 0.0));
    }
}

#[test]
fn form_data_validation_and_bundle() {
    let rep = rho_am(0, 1).unwrap();
    let wrong_k = FourierExpansion::new(0.3, c64(0.5, 2.0), &rep, Vec::new()).unwrap();
    assert!(JacobiFormData::new(1, 0.5, 0, c64(0.0, 4.0), wrong_k).is_err());
    let wrong_rep = FourierExpansion::new(0.0, c64(0.5, 2.0), &UnitaryRep::trivial(2), Vec::new()).unwrap();
    assert!(JacobiFormData::new(1, 0.5, 0, c64(0.0, 4.0), wrong_rep).is_err());
    let data = JacobiFormData::zero(1, 0.5, 0, c64(0.0, 4.0)).unwrap();
    let bundle = data.to_bundle("ab".repeat(32));
    let json = serde_json::to_string(&bundle).unwrap();
    let back: JacobiBundle = serde_json::from_str(&json).unwrap();
    assert_eq!(back, bundle);
    let again = JacobiFormData::from_bundle(&back, data.components.clone()).unwrap();
    assert_eq!(again.s, data.s);
}
