use num_complex::Complex64;
use proptest::prelude::*;
use string_geodesics::atlas::q_small;
use string_geodesics::elliptic::{
    cubic_sextic_correspondence, curve_from_invariants, discriminant_closed_form, du_residues, segments,
    sextic_from_invariants, u_period_check, CurveCase, Landmark, LoopKind, SegmentLabel,
};
use string_geodesics::special::WeierstrassInvariants;

proptest! {
    #[test]
    fn discriminant_closed_form_matches(h in 0.01f64..10.0, u in -3.0f64..3.0) {
        let g3 = 8.0 / 27.0 - 2.0 * u * u / h;
        let lhs = WeierstrassInvariants::new(4.0 / 3.0, g3).discriminant();
        let rhs = discriminant_closed_form(h, u);
        let scale = 16.0 * ((4.0f64 / 3.0).powi(3) + 27.0 * g3 * g3);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * scale.max(rhs.abs()));
    }

    #[test]
    fn quadratic_discriminant_is_half_h_q(h in 0.01f64..10.0, u in -3.0f64..3.0, w in -3.0f64..3.0) {
        let inv = WeierstrassInvariants::new(4.0 / 3.0, 8.0 / 27.0 - 2.0 * u * u / h);
        let disc = u * u + 4.0 * q_small(w) * h;
        let rhs = h / 2.0 * inv.q(Complex64::new(w, 0.0)).re;
        prop_assert!((disc - rhs).abs() <= 1e-12 * (1.0 + disc.abs() + h * w.abs().powi(3)));
    }

    #[test]
    fn case_matches_discriminant(h in 0.01f64..10.0, u in -3.0f64..3.0) {
        prop_assume!(u != 0.0);
        let c = curve_from_invariants(h, u).unwrap();
        let d = discriminant_closed_form(h, u);
        match c.case {
            CurveCase::Case1Pos => prop_assert!(d > 0.0),
            CurveCase::Case2Neg => prop_assert!(d < 0.0),
            CurveCase::Degenerate => prop_assert!((8.0 * h - 27.0 * u * u).abs() < 1e-10),
        }
    }

    #[test]
    fn sextic_paired_and_distinct(h in 0.01f64..10.0, u in -3.0f64..3.0) {
        let s = sextic_from_invariants(h, u);
        prop_assert!(s.paired);
        let generic = u != 0.0 && (8.0 * h - 27.0 * u * u).abs() > 1e-6 * h;
        if generic {
            prop_assert!(s.distinct);
            let c = curve_from_invariants(h, u).unwrap();
            let r = cubic_sextic_correspondence(&c, &s, 1).unwrap();
            prop_assert!(r.identity_residual <= 1e-10);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn residues_sum_to_zero(h in 0.05f64..8.0, u in 0.01f64..2.0, eps in prop_oneof![Just(1i8), Just(-1i8)]) {
        prop_assume!((8.0 * h - 27.0 * u * u).abs() > 1e-3 * h);
        let c = curve_from_invariants(h, u).unwrap();
        let r = du_residues(&c, eps).unwrap();
        prop_assert!(r.max_discrepancy() < 1e-8, "{:?}", r);
        prop_assert!((r.du_residues[0] + r.du_residues[1]).abs() < 1e-12);
        prop_assert!((r.du_residues[0].abs() - 2.0).abs() < 1e-12);
        let p = u_period_check(&c, eps, LoopKind::SinglePole).unwrap();
        prop_assert!((p.period.norm() - 4.0 * std::f64::consts::PI).abs() < 1e-8);
        prop_assert!(p.period.re.abs() < 1e-8);
    }
}

#[test]
fn landmarks_on_real_segments() {
    let t = segments(&curve_from_invariants(2.0, 0.3).unwrap()).unwrap();
    assert!(t.get(SegmentLabel::B).unwrap().landmarks.contains(&Landmark::Scri));
    assert!(t.get(SegmentLabel::D).unwrap().landmarks.contains(&Landmark::Horizon));
    assert!(t.get(SegmentLabel::A).unwrap().landmarks.is_empty());
    assert!(t.get(SegmentLabel::C).unwrap().landmarks.is_empty());
}

#[test]
fn both_pole_loop_vanishes() {
    for (h, u) in [(1.0, 0.1), (1.0, 1.0), (3.0, 0.7)] {
        let c = curve_from_invariants(h, u).unwrap();
        let p = u_period_check(&c, -1, LoopKind::BothPoles).unwrap();
        assert!(p.period.norm() < 1e-8, "{h} {u} {p:?}");
        assert!(p.exp_half_roundtrip < 1e-8);
    }
}
