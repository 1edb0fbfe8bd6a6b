use proptest::prelude::*;
use string_geodesics::atlas::{
    direct_neighbours, hamiltonian, q_small, surface_residual, to_chart, ChartId, CotangentState, Sheet,
};

fn radius() -> impl Strategy<Value = f64> {
    prop_oneof![1.05f64..20.0, 0.02f64..0.95]
}

fn ef_state() -> impl Strategy<Value = CotangentState<f64>> {
    (radius(), -3.0f64..3.0, -2.0f64..2.0, -2.0f64..2.0, any::<bool>()).prop_map(|(r, u, m1, m2, adv)| {
        let chart = if adv { ChartId::EfAdv } else { ChartId::EfRet };
        CotangentState::new(chart, [u, 1.0 / r - 1.0 / 3.0], [m1, m2])
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn hamiltonian_agrees_across_neighbours(s in ef_state()) {
        let h = hamiltonian(&s).unwrap();
        for &target in direct_neighbours(s.chart) {
            let Ok(t) = to_chart(&s, target) else { continue };
            let ht = hamiltonian(&t).unwrap();
            prop_assert!((ht - h).abs() <= 1e-10 * (1.0 + h.abs()), "{} -> {}: {} vs {}", s.chart, target, h, ht);
            if let Ok(back) = to_chart(&t, s.chart) {
                for (a, b) in back.to_array().iter().zip(s.to_array()) {
                    prop_assert!((a - b).abs() <= 1e-9 * (1.0 + b.abs()));
                }
            }
        }
    }

    #[test]
    fn ef_coefficient_identity(s in 0.01f64..3.0) {
        // −2Q(s − 1/3) = s²(1 − s) with s = 1/r
        let lhs = -2.0 * q_small(s - 1.0 / 3.0);
        prop_assert!((lhs - s * s * (1.0 - s)).abs() <= 1e-12);
    }

    #[test]
    fn kruskal_points_lie_on_the_surface(s in ef_state()) {
        if let Ok(k) = to_chart(&s, ChartId::Ks) {
            let x = (1.0 / (s.position[1] + 1.0 / 3.0)).sqrt();
            let res = surface_residual(k.position[0].into(), k.position[1].into(), x.into());
            prop_assert!(res.norm() <= 1e-10 * (1.0 + (k.position[0] * k.position[1]).abs()));
        }
    }
}

#[test]
fn q_vanishes_at_horizon_and_scri() {
    assert!(q_small(2.0 / 3.0).abs() < 1e-15);
    assert!(q_small(-1.0 / 3.0).abs() < 1e-15);
}

#[test]
fn double_cover_sheets() {
    let s = CotangentState::new(ChartId::EfAdv, [0.0, 1.0 / 0.2 - 1.0 / 3.0], [0.3, 0.4]);
    let x = to_chart(&s, ChartId::Xu).unwrap();
    assert!(x.position[1] > 0.0);
    let neg = to_chart(&s.with_sheet(Sheet::Negative), ChartId::Xu).unwrap();
    assert!((neg.position[1] + x.position[1]).abs() < 1e-14);
    assert!((hamiltonian(&neg).unwrap() - hamiltonian(&x).unwrap()).abs() < 1e-12);
}

#[test]
fn chart_names_round_trip() {
    for c in ChartId::ALL {
        assert_eq!(c.as_str().parse::<ChartId>().unwrap(), c);
    }
    assert!("nowhere".parse::<ChartId>().is_err());
}
