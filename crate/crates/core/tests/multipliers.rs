use maass_core::covergroup::*;
use maass_core::linalg::{max_abs, CMatrix};
use maass_core::multipliers::*;
use maass_core::{c64, C64};
use proptest::prelude::*;
use std::f64::consts::PI;

fn gen_matrix() -> impl Strategy<Value = SL2Z> {
    prop_oneof![(-3i64..4).prop_map(SL2Z::t_pow), Just(SL2Z::S), Just(SL2Z::NEG_IDENTITY)]
}

fn gamma_word(max_len: usize) -> impl Strategy<Value = SL2Z> {
    prop::collection::vec(gen_matrix(), 1..=max_len)
        .prop_map(|v| v.into_iter().fold(SL2Z::IDENTITY, |acc, g| acc * g))
}

#[test]
fn v_k_examples() {
    let z = c64(0.2, 0.9);
    for k in [0.5, 1.3, -0.4] {
        let vt = v_k(&SL2Z::T, k, z).unwrap();
        assert!((vt - C64::from_polar(1.0, PI * k / 6.0)).norm() < 1e-12);
        let vn = v_k(&SL2Z::NEG_IDENTITY, k, z).unwrap();
        assert!((vn - C64::from_polar(1.0, -PI * k)).norm() < 1e-12);
    }
    let g = SL2Z::new(5, 2, 7, 3).unwrap();
    assert!((v_k(&g, 0.0, z).unwrap() - 1.0).norm() < 1e-15);
    assert!(v_k(&g, 1.0, c64(0.0, -1.0)).is_err());
}

#[test]
fn v_k_weight_one_is_eta_squared_multiplier() {
    // v_1(S) = e^{-pi i/2} since eta(-1/z)^2 = -i z eta(z)^2
    let v = v_k(&SL2Z::S, 1.0, c64(0.1, 1.3)).unwrap();
    assert!((v - c64(0.0, -1.0)).norm() < 1e-12);
}

#[test]
fn v_k_is_a_multiplier_system() {
    // v(g1 g2) = v(g1) v(g2) e^{-2 pi i k n(g1,g2)}
    let k = 1.3;
    let g1 = SL2Z::new(2, 1, 3, 2).unwrap();
    let g2 = SL2Z::new(1, -1, -2, 3).unwrap();
    let n = cocycle(&g1.to_mat2(), &g2.to_mat2());
    let lhs = v_k_word(&(g1 * g2), k);
    let rhs = v_k_word(&g1, k) * v_k_word(&g2, k) * C64::from_polar(1.0, -2.0 * PI * k * n as f64);
    assert!((lhs - rhs).norm() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]
    #[test]
    fn eta_quotient_matches_word(g in gamma_word(8), k in prop_oneof![Just(0.5), Just(1.3), -2.0f64..2.0]) {
        let probe = balanced_probe(&g, c64(-0.2, 0.9));
        let v = v_k(&g, k, probe).unwrap();
        prop_assert!((v.norm() - 1.0).abs() < 1e-10);
        prop_assert!((v - v_k_word(&g, k)).norm() < 1e-10);
    }

    #[test]
    fn multiplier_is_homomorphism_up_to_cocycle(g1 in gamma_word(5), g2 in gamma_word(5)) {
        let rep = rho_am(5, 2).unwrap();
        let k = -0.5;
        let n = cocycle(&g1.to_mat2(), &g2.to_mat2());
        let lhs = multiplier(&rep, k, &(g1 * g2));
        let rhs = multiplier(&rep, k, &g1) * multiplier(&rep, k, &g2);
        let phase = C64::from_polar(1.0, -2.0 * PI * k * n as f64);
        prop_assert!(max_abs(&(lhs - rhs.map(|z| z * phase))) < 1e-11);
    }
}

#[test]
fn rho_example_m1() {
    let rep = rho_am_variant(0, 1, RhoSign::Minus).unwrap();
    let r = 1.0 / 2f64.sqrt();
    let expect = CMatrix::from_row_slice(2, 2, &[c64(-r, 0.0), c64(r, 0.0), c64(r, 0.0), c64(r, 0.0)]);
    assert!(max_abs(&(&rep.r_s - expect)) < 1e-15);
    let (r1, r2) = rep.relation_residuals(&Character::chi(-0.5));
    assert!(r1 < 1e-12 && r2 < 1e-12);
}

#[test]
fn rho_sign_variants() {
    let mut minus_failures = 0;
    for m in [1, 2, 3, 5] {
        for a in 0..12 {
            let plus = rho_am_variant(a, m, RhoSign::Plus).unwrap();
            assert!(plus.unitarity_residual() < 1e-12);
            assert!(max_abs(&(&plus.r_s - plus.r_s.transpose())) == 0.0);
            for kp in [-0.5, 0.0, 0.5, 1.5] {
                let (r1, r2) = plus.relation_residuals(&Character::chi(kp));
                assert!(r1 < 1e-12 && r2 < 1e-12, "a={a} m={m}");
            }
            let minus = rho_am_variant(a, m, RhoSign::Minus).unwrap();
            assert!(minus.unitarity_residual() < 1e-12);
            if !rho_variant_passes(&minus) {
                minus_failures += 1;
            }
            let chosen = rho_am(a, m).unwrap();
            let expect = if rho_variant_passes(&minus) { minus.r_s } else { plus.r_s };
            assert_eq!(chosen.r_s, expect);
        }
    }
    // only m = 1 leaves the two variants indistinguishable
    assert_eq!(minus_failures, 36);
}

#[test]
fn rho_s_fourth_power_is_identity() {
    for m in [1, 2, 3] {
        let rep = rho_am(7, m).unwrap();
        let s2 = &rep.r_s * &rep.r_s;
        let n = rep.dim;
        assert!(max_abs(&(&s2 * &s2 - CMatrix::identity(n, n))) < 1e-12);
        assert!(max_abs(&(rep.eval(&SL2Z::NEG_IDENTITY) - s2)) < 1e-15);
    }
}

#[test]
fn kappa_spectrum_examples() {
    let triv = UnitaryRep::trivial(1);
    let ks = kappa_spectrum(&triv, 0.0).unwrap();
    assert_eq!(ks.kappas, vec![0.0]);
    let ks = kappa_spectrum(&triv, 1.0).unwrap();
    assert!((ks.kappas[0] - 1.0 / 12.0).abs() < 1e-14);
    // rho_{0,1} with k' = -1/2: v(T) rho(T) = diag(e^{-pi i/12} e^{pi i(1/12 - j^2/2)})
    let rep = rho_am(0, 1).unwrap();
    let ks = kappa_spectrum(&rep, -0.5).unwrap();
    let mut got = ks.kappas.clone();
    got.sort_by(f64::total_cmp);
    let mut expect: Vec<f64> = [1.0f64, 2.0]
        .iter()
        .map(|j| ((-1.0 / 12.0 + 1.0 / 12.0 - j * j / 2.0) / 2.0).rem_euclid(1.0))
        .collect();
    expect.sort_by(f64::total_cmp);
    for (g, e) in got.iter().zip(&expect) {
        assert!((g - e).abs() < 1e-13);
    }
}

#[test]
fn kappa_spectrum_invariants() {
    for (a, m, k) in [(0, 1, -0.5), (3, 2, 0.25), (11, 3, 1.0), (5, 5, -0.5)] {
        let rep = rho_am(a, m).unwrap();
        let ks = kappa_spectrum(&rep, k).unwrap();
        let vt = rep.r_t.map(|z| z * C64::from_polar(1.0, PI * k / 6.0));
        let n = rep.dim;
        let v = &ks.vectors;
        assert!(max_abs(&(v * v.adjoint() - CMatrix::identity(n, n))) < 1e-12);
        for (l, kap) in ks.kappas.iter().enumerate() {
            assert!((0.0..1.0).contains(kap));
            let e = v.column(l);
            let lhs = &vt * e;
            let rhs = e.map(|z| z * C64::from_polar(1.0, 2.0 * PI * kap));
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }
}

#[test]
fn descriptor_serialization() {
    let d = RepDescriptor::RhoAm { a: 3, m: 2 };
    assert_eq!(serde_json::to_string(&d).unwrap(), r#"{"type":"rho_am","a":3,"m":2}"#);
    let t: RepDescriptor = serde_json::from_str(r#"{"type":"trivial","dim":1}"#).unwrap();
    assert_eq!(t, RepDescriptor::Trivial { dim: 1 });
}
