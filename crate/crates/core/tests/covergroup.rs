use maass_core::covergroup::*;
use maass_core::{c64, I};
use proptest::prelude::*;
use std::f64::consts::PI;

fn gen_matrix() -> impl Strategy<Value = SL2Z> {
    prop_oneof![(-4i64..5).prop_map(SL2Z::t_pow), Just(SL2Z::S), Just(SL2Z::S.inverse()), Just(SL2Z::NEG_IDENTITY)]
}

fn gamma_word(max_len: usize) -> impl Strategy<Value = SL2Z> {
    prop::collection::vec(gen_matrix(), 0..=max_len)
        .prop_map(|v| v.into_iter().fold(SL2Z::IDENTITY, |acc, g| acc * g))
}

#[test]
fn lift_examples() {
    let id = lift(Mat2::IDENTITY);
    assert_eq!(id, CoverElement::identity());
    assert_eq!(sigma_tilde(), kappa_tilde(-PI / 2.0));
    assert_eq!(tau_tilde().base, SL2Z::T.to_mat2());
    assert_eq!(tau_tilde().winding, 0);
    assert!((iwasawa(&tau_tilde().base).z - c64(1.0, 1.0)).norm() < 1e-15);
    assert!(lift_checked(Mat2 { a: 2.0, b: 0.0, c: 0.0, d: 1.0 }).is_err());
}

#[test]
fn cover_relations() {
    let s = sigma_tilde();
    let t = tau_tilde();
    let s4 = s.pow(4);
    assert_eq!(s4.base, Mat2::IDENTITY);
    assert_eq!(s4.winding, -1);
    assert_eq!(s4, kappa_tilde_pi(-2));
    let ts3 = (t * s).pow(3);
    assert_eq!(ts3, s.pow(2));
    assert_eq!(s.pow(2) * t, t * s.pow(2));
    assert_eq!(s.pow(2), kappa_tilde_pi(-1));
    assert_eq!(lift(SL2Z::NEG_IDENTITY.to_mat2()), kappa_tilde_pi(-1));
}

#[test]
fn kappa_tilde_consistency() {
    for n in -7..8 {
        let a = kappa_tilde(PI * n as f64 + 1e-13 * if n % 2 == 0 { 0.0 } else { 0.0 });
        let b = kappa_tilde_pi(n);
        assert_eq!(a.winding, b.winding, "n = {n}");
        assert!((a.base.a - b.base.a).abs() < 1e-12);
        assert!((a.theta() - PI * n as f64).abs() < 1e-12);
    }
    let x = kappa_tilde(1.1) * kappa_tilde(2.5);
    let y = kappa_tilde(3.6);
    assert_eq!(x.winding, y.winding);
    assert!((x.theta() - 3.6).abs() < 1e-12);
}

#[test]
fn iwasawa_examples() {
    let c = iwasawa(&Mat2::IDENTITY);
    assert_eq!((c.z, c.theta), (I, 0.0));
    let y: f64 = 3.7;
    let g = Mat2 { a: y.sqrt(), b: 0.0, c: 0.0, d: 1.0 / y.sqrt() };
    let c = iwasawa(&g);
    assert!((c.z - c64(0.0, y)).norm() < 1e-14 && c.theta == 0.0);
    let c = iwasawa(&SL2Z::S.to_mat2());
    assert!((c.z - I).norm() < 1e-15 && (c.theta + PI / 2.0).abs() < 1e-15);
}

#[test]
fn moebius_examples() {
    let z = c64(0.3, 0.8);
    assert_eq!(moebius(&SL2Z::T.to_mat2(), Point::Upper(z)), Point::Upper(z + 1.0));
    match moebius(&SL2Z::S.to_mat2(), Point::Upper(I)) {
        Point::Upper(w) => assert!((w - I).norm() < 1e-15),
        _ => panic!(),
    }
    assert_eq!(moebius(&SL2Z::S.to_mat2(), Point::Real(2.0)), Point::Real(-0.5));
    assert_eq!(moebius(&SL2Z::S.to_mat2(), Point::Real(0.0)), Point::Infinity);
    assert_eq!(moebius(&SL2Z::S.to_mat2(), Point::Infinity), Point::Real(0.0));
}

proptest! {
    #[test]
    fn iwasawa_roundtrip(a in -3.0f64..3.0, b in -3.0f64..3.0, c in -3.0f64..3.0) {
        prop_assume!(a.abs() > 0.1);
        let d = (1.0 + b * c) / a;
        let g = Mat2::new(a, b, c, d).unwrap();
        let h = from_iwasawa(&iwasawa(&g));
        prop_assert!((h.a - g.a).abs() < 1e-12 && (h.b - g.b).abs() < 1e-12);
        prop_assert!((h.c - g.c).abs() < 1e-12 && (h.d - g.d).abs() < 1e-12);
    }

    #[test]
    fn product_projects_to_matrix_product(x in gamma_word(6), y in gamma_word(6), w1 in -3i64..4, w2 in -3i64..4) {
        let gx = CoverElement { base: x.to_mat2(), winding: w1 };
        let gy = CoverElement { base: y.to_mat2(), winding: w2 };
        prop_assert_eq!((gx * gy).pr(), (x * y).to_mat2());
        let n = cocycle(&x.to_mat2(), &y.to_mat2());
        prop_assert!((-1..=1).contains(&n));
    }

    #[test]
    fn associativity(x in gamma_word(5), y in gamma_word(5), z in gamma_word(5)) {
        let (a, b, c) = (lift(x.to_mat2()), lift(y.to_mat2()), lift(z.to_mat2()));
        prop_assert_eq!((a * b) * c, a * (b * c));
    }

    #[test]
    fn associativity_real(t1 in -3.0f64..3.0, t2 in -3.0f64..3.0, t3 in -3.0f64..3.0, x in gamma_word(4)) {
        let a = kappa_tilde(t1) * lift(x.to_mat2());
        let b = kappa_tilde(t2);
        let c = lift(x.inverse().to_mat2()) * kappa_tilde(t3);
        let l = (a * b) * c;
        let r = a * (b * c);
        prop_assert_eq!(l.winding, r.winding);
        prop_assert!((l.theta() - r.theta()).abs() < 1e-9);
    }

    #[test]
    fn word_decomposition_roundtrip(x in gamma_word(10)) {
        let w = x.word();
        prop_assert_eq!(w.evaluate(), x);
        prop_assert_eq!(w.lift_product().pr(), x.to_mat2());
    }

    #[test]
    fn parenthesization_independent(v in prop::collection::vec(gen_matrix(), 1..8), split in 0usize..8) {
        let lifts: Vec<CoverElement> = v.iter().map(|g| lift(g.to_mat2())).collect();
        let split = split.min(lifts.len());
        let left = lifts.iter().fold(CoverElement::identity(), |acc, g| acc * *g);
        let a = lifts[..split].iter().fold(CoverElement::identity(), |acc, g| acc * *g);
        let b = lifts[split..].iter().rev().fold(CoverElement::identity(), |acc, g| *g * acc);
        prop_assert_eq!(left, a * b);
    }

    #[test]
    fn inverse_is_two_sided(x in gamma_word(6), w in -2i64..3) {
        let g = CoverElement { base: x.to_mat2(), winding: w };
        prop_assert_eq!(g * g.inverse(), CoverElement::identity());
        prop_assert_eq!(g.inverse() * g, CoverElement::identity());
    }
}
