use num_complex::Complex64;
use proptest::prelude::*;

use super::*;

/// Chart metrics written out independently of the Hamiltonians:
/// `[g11, g12, g22]`.
fn metric(chart: ChartId, pos: [f64; 2], ks_x: Option<f64>) -> [f64; 3] {
    let [a, b] = pos;
    match chart {
        ChartId::Schw => [(b - 1.0) / b.powi(3), 0.0, -1.0 / (b * (b - 1.0))],
        ChartId::EfAdv | ChartId::EfRet => [-2.0 * q_small(b), 1.0, 0.0],
        ChartId::Ks => {
            let x = ks_x.unwrap();
            [0.0, -2.0 / (x.powi(6) * (x * x - 1.0).exp()), 0.0]
        }
        ChartId::Xu | ChartId::Xv => [(b * b - 1.0) / b.powi(6), -2.0 / b.powi(3), 0.0],
        ChartId::Xt => [(b * b - 1.0) / b.powi(6), 0.0, -4.0 / (b * b - 1.0)],
        ChartId::Xp | ChartId::Xq => [4.0 * (b * b - 1.0) / (b.powi(6) * a * a), -4.0 / (b.powi(3) * a), 0.0],
        ChartId::Yp | ChartId::Yq => [4.0 * (b * b - b.powi(3)) / (a * a), 2.0 / a, 0.0],
    }
}

fn inverse_metric_energy(g: [f64; 3], m: [f64; 2]) -> f64 {
    let det = g[0] * g[2] - g[1] * g[1];
    let inv = [g[2] / det, -g[1] / det, g[0] / det];
    0.5 * (inv[0] * m[0] * m[0] + 2.0 * inv[1] * m[0] * m[1] + inv[2] * m[1] * m[1])
}

/// A random valid state in `chart`, away from chart boundaries.
fn sample(chart: ChartId, c: [f64; 4]) -> Option<CotangentState<f64>> {
    let [a, b, m1, m2] = c;
    let away = |v: f64, from: f64| (v - from).abs() > 0.05;
    let st = |pos: [f64; 2]| CotangentState::new(chart, pos, [m1, m2]);
    match chart {
        ChartId::Schw => {
            let r = 0.1 + 3.0 * b.abs();
            away(r, 1.0).then(|| st([a, r]))
        }
        ChartId::EfAdv | ChartId::EfRet => away(b, 2.0 / 3.0).then(|| st([a, b])),
        ChartId::Ks => {
            let x = 0.2 + 1.5 * b.abs();
            let p = if a.abs() < 0.1 { 0.1f64.copysign(a) } else { a };
            let d = x * x - 1.0;
            Some(st([p, d * d.exp() / p]).with_ks_x(x))
        }
        ChartId::Xt => away(b * b, 1.0).then(|| st([a, b])),
        ChartId::Xp | ChartId::Xq | ChartId::Yp | ChartId::Yq => (a.abs() > 0.1).then(|| st([a, b])),
        _ => Some(st([a, b])),
    }
}

fn chart_strategy() -> impl Strategy<Value = ChartId> {
    proptest::sample::select(ChartId::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn closed_forms_equal_inverse_metric(chart in chart_strategy(), a in -2.0f64..2.0, b in -1.5f64..1.5,
                                         m1 in -2.0f64..2.0, m2 in -2.0f64..2.0) {
        let b = if chart.carries_x() || matches!(chart, ChartId::Yp | ChartId::Yq) { b } else { b.abs() + 0.05 };
        prop_assume!(b.abs() > 0.1);
        let Some(s) = sample(chart, [a, b, m1, m2]) else { return Ok(()) };
        let h = hamiltonian(&s).unwrap();
        let g = metric(chart, s.position, s.ks_x);
        let expect = inverse_metric_energy(g, s.momentum);
        prop_assert!((h - expect).abs() <= 1e-12 * (1.0 + expect.abs()) * 10.0, "{chart}: {h} vs {expect}");
    }

    #[test]
    fn hamiltonian_is_chart_independent(chart in chart_strategy(), a in -2.0f64..2.0, b in -1.5f64..1.5,
                                        m1 in -2.0f64..2.0, m2 in -2.0f64..2.0) {
        prop_assume!(b.abs() > 0.1);
        let Some(s) = sample(chart, [a, b, m1, m2]) else { return Ok(()) };
        // overlaps with the t charts degenerate at the horizon, and the
        // advanced/retarded overlap loses ~r² digits towards scri
        let r = region::radius(&s).unwrap();
        prop_assume!((r - 1.0).abs() > 0.05 && r.abs() < 20.0);
        let h = hamiltonian(&s).unwrap();
        for target in ChartId::ALL {
            if let Ok(t) = to_chart(&s, target) {
                let ht = hamiltonian(&t).unwrap();
                prop_assert!((ht - h).abs() <= 1e-10 * (1.0 + h.abs()), "{chart} -> {target}: {h} vs {ht}");
                let back = to_chart(&t, chart).unwrap();
                for (u, v) in back.to_array().iter().zip(s.to_array()) {
                    prop_assert!((u - v).abs() <= 1e-9 * (1.0 + v.abs()), "{chart} -> {target} -> {chart}");
                }
            }
        }
    }

    #[test]
    fn complex_hamiltonian_is_chart_independent(pr in 0.2f64..2.0, pi in -1.0f64..1.0, xr in 0.3f64..1.5, xi in -0.6f64..0.6,
                                                m in proptest::array::uniform4(-1.0f64..1.0)) {
        let c = Complex64::new;
        let s = CotangentState::new(ChartId::Xp, [c(pr, pi), c(xr, xi)], [c(m[0], m[1]), c(m[2], m[3])]);
        let h = hamiltonian(&s).unwrap();
        for target in ChartId::ALL {
            if let Ok(t) = to_chart(&s, target) {
                let ht = hamiltonian(&t).unwrap();
                prop_assert!((ht - h).norm() <= 1e-10 * (1.0 + h.norm()), "{target}");
            }
        }
    }

    #[test]
    fn metric_coefficient_identity(s in -3.0f64..3.0) {
        // −2Q(s − 1/3) = s²(1 − s)
        let lhs = -2.0 * q_small(s - 1.0 / 3.0);
        prop_assert!((lhs - s * s * (1.0 - s)).abs() <= 1e-12 * (1.0 + s.abs().powi(3)));
    }
}

#[test]
fn q_vanishes_at_horizon_and_scri() {
    assert!(q_small(2.0f64 / 3.0).abs() < 1e-16);
    assert!(q_small(-1.0f64 / 3.0).abs() < 1e-16);
}

#[test]
fn chart_ids_parse() {
    for c in ChartId::ALL {
        assert_eq!(c.as_str().parse::<ChartId>().unwrap(), c);
        let json = serde_json_like(c);
        assert_eq!(json, c.as_str());
    }
    assert!("nope".parse::<ChartId>().is_err());
}

fn serde_json_like(c: ChartId) -> String {
    // Display and serde names coincide.
    format!("{c}")
}
