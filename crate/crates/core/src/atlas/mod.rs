//! Coordinate charts of the string surface, their geodesic Hamiltonians and
//! the cotangent transition maps between overlapping charts.
//!
//! Coordinates are `(t, r)` Schwarzschild, the advanced/retarded
//! Eddington–Finkelstein pairs `(u, ω)`/`(v, ω)` with `ω = 1/r − 1/3`,
//! Kruskal–Szekeres `(p, q)` on the surface `pq = (x² − 1)e^{x²−1}`, the
//! double cover `r = x²` that resolves the singularity, and `y = 1/x²` near
//! conformal infinity.

mod check;
mod hamiltonian;
mod region;
mod scalar;
mod surface;
mod transition;

#[cfg(test)]
mod tests;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::special::WBranch;

pub use check::{atlas_check, AtlasCheckConfig, AtlasCheckReport};
pub use hamiltonian::{hamiltonian, hamiltonian_gradient, vector_field, Gradient};
pub(crate) use region::radius;
pub use region::{classify_region, Quadrant, RegionLabel, Side};
pub use scalar::Scalar;
pub use surface::{surface_constraint, surface_residual, surface_residuals};
pub use transition::{direct_neighbours, reflect_kruskal, swap_null_family, to_chart, to_chart_with};

/// The charts of the atlas. Momentum names follow the canonical one-form
/// of each chart.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChartId {
    /// `(t, r; T, R)`, exterior or interior Schwarzschild.
    Schw,
    /// `(u, ω; U, Ω)`, advanced Eddington–Finkelstein.
    EfAdv,
    /// `(v, ω; V, Ω)`, retarded Eddington–Finkelstein.
    EfRet,
    /// `(p, q; P, Q)`, Kruskal–Szekeres.
    Ks,
    /// `(u, x; U, X)` with `r = x²`.
    Xu,
    /// `(v, x; V, X)` with `r = x²`.
    Xv,
    /// `(t, x; T, X)` with `r = x²`.
    Xt,
    /// `(p, y; P, Y)` with `x² y = 1`.
    Yp,
    /// `(q, y; Q, Y)` with `x² y = 1`.
    Yq,
    /// `(p, x; R, X)`.
    Xp,
    /// `(q, x; S, Y)`.
    Xq,
}

impl ChartId {
    pub const ALL: [ChartId; 11] = [
        ChartId::Schw,
        ChartId::EfAdv,
        ChartId::EfRet,
        ChartId::Ks,
        ChartId::Xu,
        ChartId::Xv,
        ChartId::Xt,
        ChartId::Yp,
        ChartId::Yq,
        ChartId::Xp,
        ChartId::Xq,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ChartId::Schw => "schw",
            ChartId::EfAdv => "ef_adv",
            ChartId::EfRet => "ef_ret",
            ChartId::Ks => "ks",
            ChartId::Xu => "xu",
            ChartId::Xv => "xv",
            ChartId::Xt => "xt",
            ChartId::Yp => "yp",
            ChartId::Yq => "yq",
            ChartId::Xp => "xp",
            ChartId::Xq => "xq",
        }
    }

    /// Whether the second coordinate is `x` (so the sheet is read off it).
    pub fn carries_x(self) -> bool {
        matches!(self, ChartId::Xu | ChartId::Xv | ChartId::Xt | ChartId::Xp | ChartId::Xq)
    }
}

impl fmt::Display for ChartId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ChartId {
    type Err = AtlasError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ChartId::ALL
            .into_iter()
            .find(|c| c.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| AtlasError::UnknownChart(s.to_string()))
    }
}

/// Sign of `x` on the double cover `r = x²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Sheet {
    #[default]
    Positive,
    Negative,
}

impl Sheet {
    pub fn sign(self) -> f64 {
        match self {
            Sheet::Positive => 1.0,
            Sheet::Negative => -1.0,
        }
    }

    pub fn flipped(self) -> Sheet {
        match self {
            Sheet::Positive => Sheet::Negative,
            Sheet::Negative => Sheet::Positive,
        }
    }

    pub(crate) fn of<S: Scalar>(x: S) -> Option<Sheet> {
        let key = if x.real_part() != 0.0 { x.real_part() } else { x.imag_part() };
        if key > 0.0 {
            Some(Sheet::Positive)
        } else if key < 0.0 {
            Some(Sheet::Negative)
        } else {
            None
        }
    }
}

/// A point of the cotangent bundle of the string surface in one chart.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CotangentState<S> {
    pub chart: ChartId,
    pub position: [S; 2],
    pub momentum: [S; 2],
    /// Sheet of the double cover; authoritative in charts without `x`.
    pub sheet: Sheet,
    /// Lambert-W branch giving `r = 1 + W(pq)` for real Kruskal–Szekeres
    /// points (lower branch beyond conformal infinity, `r < 0`).
    pub branch: WBranch,
    /// `x` carried alongside `(p, q)` where it cannot be recovered from
    /// Lambert W (complex mode).
    pub ks_x: Option<S>,
}

impl<S: Scalar> CotangentState<S> {
    pub fn new(chart: ChartId, position: [S; 2], momentum: [S; 2]) -> Self {
        Self { chart, position, momentum, sheet: Sheet::Positive, branch: WBranch::Principal, ks_x: None }
    }

    pub fn with_sheet(mut self, sheet: Sheet) -> Self {
        self.sheet = sheet;
        self
    }

    pub fn with_ks_x(mut self, x: S) -> Self {
        self.ks_x = Some(x);
        self
    }

    /// Packs the state as `[c1, c2, m1, m2]`.
    pub fn to_array(&self) -> [S; 4] {
        [self.position[0], self.position[1], self.momentum[0], self.momentum[1]]
    }

    pub fn with_array(mut self, a: [S; 4]) -> Self {
        self.position = [a[0], a[1]];
        self.momentum = [a[2], a[3]];
        self
    }

    /// Checks the chart validity predicate.
    pub fn validate(&self) -> Result<(), AtlasError> {
        if !self.to_array().iter().all(|c| c.is_finite()) {
            return Err(AtlasError::Invalid { chart: self.chart, reason: "non-finite component" });
        }
        let [a, b] = self.position;
        let reason = match self.chart {
            ChartId::Schw if b.is_zero() => Some("r = 0"),
            ChartId::Schw if (b - 1.0).is_zero() => Some("r = 1"),
            ChartId::Ks => match transition::ks_radius(self) {
                Ok(r) if r.is_zero() => Some("x = 0"),
                Ok(_) => None,
                Err(_) => Some("pq outside the Lambert W domain"),
            },
            ChartId::Xt if (b * b - 1.0).is_zero() => Some("x² = 1"),
            ChartId::Xp | ChartId::Yp | ChartId::Xq | ChartId::Yq if a.is_zero() => Some("p or q = 0"),
            _ => None,
        };
        match reason {
            Some(reason) => Err(AtlasError::Invalid { chart: self.chart, reason }),
            None => Ok(()),
        }
    }
}

impl CotangentState<f64> {
    pub fn to_complex(&self) -> CotangentState<num_complex::Complex64> {
        CotangentState {
            chart: self.chart,
            position: self.position.map(|v| v.to_complex()),
            momentum: self.momentum.map(|v| v.to_complex()),
            sheet: self.sheet,
            branch: self.branch,
            ks_x: self.ks_x.map(|v| v.to_complex()),
        }
    }
}

/// Additive constant in the Eddington–Finkelstein null coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum UConvention {
    /// `u = t + r + ½ ln((r − 1)²)`; Kruskal `p = e^{(u−1)/2}`.
    #[default]
    Plain,
    /// `u = t + r − 1 + ½ ln((r − 1)²)`; Kruskal `p = e^{u/2}`.
    Shifted,
}

impl UConvention {
    pub(crate) fn shift(self) -> f64 {
        match self {
            UConvention::Plain => 0.0,
            UConvention::Shifted => -1.0,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AtlasError {
    #[error("unknown chart `{0}`")]
    UnknownChart(String),
    #[error("state invalid in chart {chart}: {reason}")]
    Invalid { chart: ChartId, reason: &'static str },
    #[error("point outside the overlap of {from} and {to}: {reason}")]
    Overlap { from: ChartId, to: ChartId, reason: &'static str },
}

/// `Q(ω) = ω³/2 − ω/6 − 1/27 = ½(ω − 2/3)(ω + 1/3)²`.
pub fn q_small<S: Scalar>(w: S) -> S {
    w * w * w * 0.5 - w / 6.0 - 1.0 / 27.0 + S::from_f64(0.0)
}

/// `Q′(ω) = (9ω² − 1)/6`.
pub fn q_small_prime<S: Scalar>(w: S) -> S {
    (w * w * 9.0 - 1.0) / 6.0
}

/// `ω = 1/r − 1/3`.
pub fn omega_of_r<S: Scalar>(r: S) -> S {
    S::from_f64(1.0) / r - 1.0 / 3.0
}

/// `r = 1/(ω + 1/3)`.
pub fn r_of_omega<S: Scalar>(w: S) -> S {
    S::from_f64(1.0) / (w + 1.0 / 3.0)
}
