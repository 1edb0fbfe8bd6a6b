use serde::{Deserialize, Serialize};

use super::transition::ks_radius;
use super::{to_chart, ChartId, CotangentState, Scalar, Sheet};

/// Kruskal quadrant: I exterior, II black-hole interior, III mirrored
/// exterior, IV white-hole interior.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Quadrant {
    I,
    II,
    III,
    IV,
    /// On `p = 0`, `q = 0` or otherwise not resolvable.
    Boundary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Schwarzschild,
    AntiSchwarzschild,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RegionLabel {
    pub quadrant: Quadrant,
    pub sheet: Sheet,
    pub side: Side,
}

/// `r` as read off any chart, `None` at scri.
pub(crate) fn radius<S: Scalar>(s: &CotangentState<S>) -> Option<S> {
    let b = s.position[1];
    let one = S::from_f64(1.0);
    match s.chart {
        ChartId::Schw => Some(b),
        ChartId::EfAdv | ChartId::EfRet => {
            let y = b + 1.0 / 3.0;
            (!y.is_zero()).then(|| one / y)
        }
        ChartId::Ks => ks_radius(s).ok(),
        ChartId::Xu | ChartId::Xv | ChartId::Xt | ChartId::Xp | ChartId::Xq => Some(b * b),
        ChartId::Yp | ChartId::Yq => (!b.is_zero()).then(|| one / b),
    }
}

fn quadrant_of(p: f64, q: f64) -> Quadrant {
    match (p.partial_cmp(&0.0), q.partial_cmp(&0.0)) {
        (Some(std::cmp::Ordering::Greater), Some(std::cmp::Ordering::Greater)) => Quadrant::I,
        (Some(std::cmp::Ordering::Greater), Some(std::cmp::Ordering::Less)) => Quadrant::II,
        (Some(std::cmp::Ordering::Less), Some(std::cmp::Ordering::Less)) => Quadrant::III,
        (Some(std::cmp::Ordering::Less), Some(std::cmp::Ordering::Greater)) => Quadrant::IV,
        _ => Quadrant::Boundary,
    }
}

/// Quadrant, sheet and side of a real state.
pub fn classify_region(state: &CotangentState<f64>) -> RegionLabel {
    let sheet = if state.chart.carries_x() { Sheet::of(state.position[1]).unwrap_or(state.sheet) } else { state.sheet };
    let side = match radius(state) {
        Some(r) if r < 0.0 => Side::AntiSchwarzschild,
        _ => Side::Schwarzschild,
    };
    let quadrant = if let Ok(k) = to_chart(state, ChartId::Ks) {
        quadrant_of(k.position[0], k.position[1])
    } else if let Ok(xp) = to_chart(state, ChartId::Xp) {
        let [p, x] = xp.position;
        quadrant_of(p, p * (x * x - 1.0))
    } else if let Ok(xq) = to_chart(state, ChartId::Xq) {
        let [q, x] = xq.position;
        quadrant_of(q * (x * x - 1.0), q)
    } else {
        Quadrant::Boundary
    };
    RegionLabel { quadrant, sheet, side }
}
