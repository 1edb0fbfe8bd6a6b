use serde::{Deserialize, Serialize};

use crate::special::{half_periods, CubicRootSet, PeriodLattice, WeierstrassInvariants};

use super::{g3_of, EllipticError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveCase {
    /// Three real roots.
    Case1Pos,
    /// One real root.
    Case2Neg,
    Degenerate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Landmark {
    Scri,
    Horizon,
    Singularity,
}

impl Landmark {
    pub fn omega(self) -> f64 {
        match self {
            Landmark::Scri => -1.0 / 3.0,
            Landmark::Horizon => 2.0 / 3.0,
            Landmark::Singularity => f64::INFINITY,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EllipticCurveData {
    pub h: f64,
    pub u: f64,
    pub inv: WeierstrassInvariants,
    pub roots: CubicRootSet,
    /// Absent for degenerate curves.
    pub lattice: Option<PeriodLattice>,
    pub case: CurveCase,
    pub landmarks: [Landmark; 3],
}

impl EllipticCurveData {
    pub fn discriminant(&self) -> f64 {
        self.inv.discriminant()
    }

    /// Real half-period `ω1`; the real period of `s` is `2ω1·√(2/H)`.
    pub fn real_half_period(&self) -> Option<f64> {
        self.lattice.map(|l| l.omega1.re)
    }
}

pub fn curve_from_invariants(h: f64, u: f64) -> Result<EllipticCurveData> {
    if !(h > 0.0) || !h.is_finite() || !u.is_finite() {
        return Err(EllipticError::Domain(h));
    }
    let inv = WeierstrassInvariants::new(4.0 / 3.0, g3_of(h, u));
    let roots = inv.roots();
    let gap = 8.0 * h - 27.0 * u * u;
    let degenerate = u == 0.0 || gap.abs() <= 1e-12 * 8.0 * h;
    let case = if degenerate {
        CurveCase::Degenerate
    } else if gap > 0.0 {
        CurveCase::Case1Pos
    } else {
        CurveCase::Case2Neg
    };
    let lattice = if degenerate { None } else { Some(half_periods(&inv)?) };
    Ok(EllipticCurveData {
        h,
        u,
        inv,
        roots,
        lattice,
        case,
        landmarks: [Landmark::Scri, Landmark::Horizon, Landmark::Singularity],
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SegmentLabel {
    A,
    B,
    C,
    D,
}

/// Whether the curve is traced for real or imaginary Weierstrass parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParameterType {
    Real,
    Imaginary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub label: SegmentLabel,
    #[serde(with = "lower_bound")]
    pub lo: f64,
    #[serde(with = "upper_bound")]
    pub hi: f64,
    pub parameter: ParameterType,
    pub landmarks: Vec<Landmark>,
}

/// JSON has no infinities; an unbounded end is written as `null`.
macro_rules! bound_serde {
    ($name:ident, $inf:expr) => {
        mod $name {
            use serde::{Deserialize, Deserializer, Serializer};

            pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
                if v.is_finite() {
                    s.serialize_some(v)
                } else {
                    s.serialize_none()
                }
            }

            pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
                Ok(Option::<f64>::deserialize(d)?.unwrap_or($inf))
            }
        }
    };
}
bound_serde!(lower_bound, f64::NEG_INFINITY);
bound_serde!(upper_bound, f64::INFINITY);

impl Segment {
    pub fn contains(&self, w: f64) -> bool {
        w > self.lo && w < self.hi || (w.is_infinite() && w > 0.0 && self.hi.is_infinite())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentTable {
    pub segments: Vec<Segment>,
}

impl SegmentTable {
    pub fn get(&self, label: SegmentLabel) -> Option<&Segment> {
        self.segments.iter().find(|s| s.label == label)
    }

    /// Segment containing `ω`, if it is not a root.
    pub fn locate(&self, w: f64) -> Option<&Segment> {
        self.segments.iter().find(|s| s.contains(w))
    }
}

/// Splits the real `ω` axis at the real roots of `q`.
pub fn segments(curve: &EllipticCurveData) -> Result<SegmentTable> {
    let bounds: Vec<(SegmentLabel, f64, f64, ParameterType)> = match curve.case {
        CurveCase::Degenerate => return Err(EllipticError::Degenerate),
        CurveCase::Case1Pos => {
            let [e1, e2, e3] = curve.roots.real_roots()[..] else {
                return Err(EllipticError::Degenerate);
            };
            use ParameterType::*;
            vec![
                (SegmentLabel::A, f64::NEG_INFINITY, e1, Imaginary),
                (SegmentLabel::B, e1, e2, Real),
                (SegmentLabel::C, e2, e3, Imaginary),
                (SegmentLabel::D, e3, f64::INFINITY, Real),
            ]
        }
        CurveCase::Case2Neg => {
            let e1 = curve.roots.real_roots()[0];
            vec![
                (SegmentLabel::A, f64::NEG_INFINITY, e1, ParameterType::Imaginary),
                (SegmentLabel::D, e1, f64::INFINITY, ParameterType::Real),
            ]
        }
    };
    let segments = bounds
        .into_iter()
        .map(|(label, lo, hi, parameter)| {
            let mut s = Segment { label, lo, hi, parameter, landmarks: Vec::new() };
            s.landmarks = curve.landmarks.iter().copied().filter(|l| s.contains(l.omega())).collect();
            s
        })
        .collect();
    Ok(SegmentTable { segments })
}
