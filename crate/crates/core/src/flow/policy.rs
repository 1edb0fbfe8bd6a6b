use crate::atlas::{
    radius, reflect_kruskal, swap_null_family, to_chart_with, ChartId, CotangentState, UConvention,
};

use super::FlowError;

/// Below this `r` the flow runs in the double cover `r = x²`.
const SINGULAR_R: f64 = 0.25;
/// Within this distance of `ω = 2/3` the flow runs in Kruskal–Szekeres.
const HORIZON_BAND: f64 = 0.1;
/// Widening of a zone once inside it.
const HYSTERESIS: f64 = 1.1;
/// Switch between advanced and retarded charts when the conjugate momentum
/// of the other is this much smaller.
const SWAP_RATIO: f64 = 2.0;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Family {
    Advanced,
    Retarded,
    Neutral,
}

fn family(chart: ChartId) -> Family {
    match chart {
        ChartId::EfAdv | ChartId::Xu | ChartId::Xp | ChartId::Yp | ChartId::Schw | ChartId::Xt => Family::Advanced,
        ChartId::EfRet | ChartId::Xv | ChartId::Xq | ChartId::Yq => Family::Retarded,
        ChartId::Ks => Family::Neutral,
    }
}

/// Chart the flow should be integrated in at `state`, treating the
/// state's own chart as the current one for hysteresis purposes.
pub fn switch_policy(state: &CotangentState<f64>) -> ChartId {
    let cur = state.chart;
    let fam = match family(cur) {
        Family::Neutral => {
            if state.position[0] > 0.0 || state.position[1] <= 0.0 {
                Family::Advanced
            } else {
                Family::Retarded
            }
        }
        f => f,
    };
    let r = radius(state);
    if let Some(r) = r {
        let in_x = matches!(cur, ChartId::Xu | ChartId::Xv);
        let limit = if in_x { SINGULAR_R * HYSTERESIS } else { SINGULAR_R };
        if (0.0..limit).contains(&r) {
            return if fam == Family::Advanced { ChartId::Xu } else { ChartId::Xv };
        }
        let w = 1.0 / r - 1.0 / 3.0;
        let band = if cur == ChartId::Ks { HORIZON_BAND * HYSTERESIS } else { HORIZON_BAND };
        if (w - 2.0 / 3.0).abs() < band {
            return ChartId::Ks;
        }
    }
    match cur {
        ChartId::EfAdv | ChartId::EfRet => {
            let beyond_interior = r.is_none_or(|r| r <= 0.0 || r > 1.0);
            let near_scri = (state.position[1] + 1.0 / 3.0).abs() < 1e-6;
            if beyond_interior && !near_scri {
                if let Ok((other, _)) = swap_null_family(state, UConvention::Plain) {
                    if state.momentum[1].abs() > SWAP_RATIO * other.momentum[1].abs() {
                        return other.chart;
                    }
                }
            }
            cur
        }
        _ => {
            if fam == Family::Advanced {
                ChartId::EfAdv
            } else {
                ChartId::EfRet
            }
        }
    }
}

/// Moves `state` into `target`; the flag reports a Kruskal reflection.
pub(crate) fn perform_switch(
    state: &CotangentState<f64>,
    target: ChartId,
    conv: UConvention,
) -> Result<(CotangentState<f64>, bool), FlowError> {
    let (mut out, reflected) = match (state.chart, target) {
        (ChartId::Ks, ChartId::EfAdv | ChartId::EfRet) if state.position[0] < 0.0 && state.position[1] < 0.0 => {
            (to_chart_with(&reflect_kruskal(state)?, ChartId::EfAdv, conv)?, true)
        }
        (ChartId::EfAdv, ChartId::EfRet) | (ChartId::EfRet, ChartId::EfAdv) => swap_null_family(state, conv)?,
        _ => (to_chart_with(state, target, conv)?, false),
    };
    if out.chart == ChartId::Ks {
        // the flow evaluates r through Lambert W; a carried x would go stale
        out.ks_x = None;
    }
    Ok((out, reflected))
}

/// Re-centres the null coordinates, returning the boost increment.
pub(crate) fn rebase(state: &mut CotangentState<f64>) -> f64 {
    match state.chart {
        ChartId::EfAdv | ChartId::Xu => {
            let b = state.position[0];
            state.position[0] = 0.0;
            b
        }
        ChartId::EfRet | ChartId::Xv => {
            let b = -state.position[0];
            state.position[0] = 0.0;
            b
        }
        ChartId::Ks => {
            let [p, q] = state.position;
            if p == 0.0 || q == 0.0 {
                return 0.0;
            }
            let b = (p.abs() / q.abs()).ln();
            let k = (0.5 * b).exp();
            state.position = [p / k, q * k];
            state.momentum = [state.momentum[0] * k, state.momentum[1] / k];
            b
        }
        _ => 0.0,
    }
}

/// Undoes a boost `b` accumulated by the integrator.
pub fn unboost(state: &CotangentState<f64>, b: f64) -> CotangentState<f64> {
    let mut s = *state;
    let k = (0.5 * b).exp();
    match s.chart {
        ChartId::EfAdv | ChartId::Xu | ChartId::Schw | ChartId::Xt => s.position[0] += b,
        ChartId::EfRet | ChartId::Xv => s.position[0] -= b,
        ChartId::Ks => {
            s.position = [s.position[0] * k, s.position[1] / k];
            s.momentum = [s.momentum[0] / k, s.momentum[1] * k];
        }
        ChartId::Xp | ChartId::Yp => {
            s.position[0] *= k;
            s.momentum[0] /= k;
        }
        ChartId::Xq | ChartId::Yq => {
            s.position[0] /= k;
            s.momentum[0] *= k;
        }
    }
    s
}

/// The momentum conjugate to `u`, read off any chart.
pub fn conserved_u(state: &CotangentState<f64>) -> f64 {
    let [a, b] = state.position;
    let [m1, m2] = state.momentum;
    match state.chart {
        ChartId::EfAdv | ChartId::Xu | ChartId::Schw | ChartId::Xt => m1,
        ChartId::EfRet | ChartId::Xv => -m1,
        ChartId::Ks => 0.5 * (a * m1 - b * m2),
        ChartId::Xp | ChartId::Yp => 0.5 * a * m1,
        ChartId::Xq | ChartId::Yq => -0.5 * a * m1,
    }
}

/// Momentum conjugate to `r` in the `(u, r)` chart, which diverges at the
/// singularity even though the flow itself is regular there.
pub fn radial_momentum_ur(state: &CotangentState<f64>) -> Option<f64> {
    let [_, b] = state.position;
    let [_, m2] = state.momentum;
    match state.chart {
        ChartId::EfAdv | ChartId::EfRet => {
            let r = 1.0 / (b + 1.0 / 3.0);
            Some(-m2 / (r * r))
        }
        ChartId::Xu | ChartId::Xv => Some(m2 / (2.0 * b)),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atlas::hamiltonian;

    fn st(chart: ChartId, c: [f64; 4]) -> CotangentState<f64> {
        CotangentState::new(chart, [c[0], c[1]], [c[2], c[3]])
    }

    #[test]
    fn horizon_goes_to_kruskal() {
        for w in [2.0 / 3.0 - 0.01, 2.0 / 3.0 + 0.01] {
            assert_eq!(switch_policy(&st(ChartId::EfAdv, [0.0, w, 0.1, 1.0])), ChartId::Ks);
        }
    }

    #[test]
    fn small_r_goes_to_double_cover() {
        assert_eq!(switch_policy(&st(ChartId::Schw, [0.0, 0.05, 0.1, 1.0])), ChartId::Xu);
        assert_eq!(switch_policy(&st(ChartId::EfRet, [0.0, 1.0 / 0.05 - 1.0 / 3.0, 0.1, 1.0])), ChartId::Xv);
    }

    #[test]
    fn scri_stays_null() {
        let s = st(ChartId::EfAdv, [0.0, -1.0 / 3.0 + 1e-9, 0.1, 1.0]);
        assert_eq!(switch_policy(&s), ChartId::EfAdv);
    }

    #[test]
    fn hysteresis() {
        let r: f64 = 0.26;
        let x = st(ChartId::Xu, [0.0, r.sqrt(), 0.1, 1.0]);
        assert_eq!(switch_policy(&x), ChartId::Xu);
        let e = st(ChartId::EfAdv, [0.0, 1.0 / r - 1.0 / 3.0, 0.1, 1.0]);
        assert_eq!(switch_policy(&e), ChartId::EfAdv);
    }

    #[test]
    fn boost_round_trip() {
        let k = st(ChartId::Ks, [40.0, 0.001, 0.3, -2.0]);
        let mut local = k;
        let b = rebase(&mut local);
        assert!((local.position[0].abs() - local.position[1].abs()).abs() < 1e-12);
        let back = unboost(&local, b);
        for (u, v) in back.to_array().iter().zip(k.to_array()) {
            assert!((u - v).abs() < 1e-12 * (1.0 + v.abs()));
        }
        assert!((hamiltonian(&local).unwrap() - hamiltonian(&k).unwrap()).abs() < 1e-12);
        assert!((conserved_u(&local) - conserved_u(&k)).abs() < 1e-12);
    }
}
