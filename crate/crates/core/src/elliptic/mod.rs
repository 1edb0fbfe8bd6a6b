//! Complexification of a geodesic: the Weierstrass curve of `ω`, its real
//! segments, the poles of `Ω dz` and the imaginary period of `u`, and the
//! genus-two sextic in `x = √r`.

mod curve;
mod fit;
mod residues;
mod sextic;
mod tuning;

pub use curve::{curve_from_invariants, segments, CurveCase, EllipticCurveData, Landmark, ParameterType, Segment, SegmentLabel, SegmentTable};
pub use fit::{fit_trajectory, TrajectoryFit};
pub use residues::{du_residues, u_period_check, PeriodReport, Pole, ResidueReport, LoopKind};
pub use sextic::{cubic_sextic_correspondence, sextic_from_invariants, CorrespondenceReport, SexticData};
pub use tuning::{advance_per_period, tune_closure};

use thiserror::Error;

use crate::special::SpecialError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EllipticError {
    #[error("string energy must be positive (got H = {0})")]
    Domain(f64),
    #[error("degenerate curve: U(8H − 27U²) = 0")]
    Degenerate,
    #[error("℘′ at the pole is {found}, expected {expected} for this branch")]
    Branch { expected: f64, found: String },
    #[error("cubic and sextic disagree: {0}")]
    Mismatch(String),
    #[error("trajectory unusable for fitting: {0}")]
    Fit(&'static str),
    #[error(transparent)]
    Special(#[from] SpecialError),
}

pub type Result<T> = std::result::Result<T, EllipticError>;

/// `g3 = 8/27 − 2U²/H`.
pub fn g3_of(h: f64, u: f64) -> f64 {
    8.0 / 27.0 - 2.0 * u * u / h
}

/// `64U²(8H − 27U²)/H²`, the closed form of `16(g2³ − 27g3²)`.
pub fn discriminant_closed_form(h: f64, u: f64) -> f64 {
    64.0 * u * u * (8.0 * h - 27.0 * u * u) / (h * h)
}
