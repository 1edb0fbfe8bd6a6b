use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::special::WeierstrassP;

use super::{CurveCase, EllipticCurveData, EllipticError, Result};

/// Trapezoid nodes on each residue circle.
const NODES: usize = 256;
/// Circle radius as a fraction of the shortest lattice vector, capped by
/// the distance to the other pole.
const RADIUS_FRACTION: f64 = 5e-2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pole {
    pub z: Complex64,
    pub omega: f64,
    pub order: u8,
    /// Residue of `Ω dz` from the Laurent expansion.
    pub residue: f64,
    /// Residue of `Ω dz` by contour quadrature.
    pub residue_contour: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidueReport {
    pub epsilon: i8,
    pub single_pole: Pole,
    pub double_pole: Pole,
    /// Residues of `du = −√(2/H) Ω dz` at the single and double pole.
    pub du_residues: [f64; 2],
}

impl ResidueReport {
    /// Largest disagreement between closed form and quadrature.
    pub fn max_discrepancy(&self) -> f64 {
        [self.single_pole, self.double_pole]
            .iter()
            .map(|p| (p.residue_contour - p.residue).norm())
            .fold(0.0, f64::max)
    }
}

/// `Ω dz` on the curve, on the branch selected by `ε`:
/// `Ω = −√(8H)·ε / (℘′(z) + c)` with `c = ε·U·√(2/H)`.
struct OmegaForm {
    wp: WeierstrassP,
    eps: f64,
    c: f64,
    scale: f64,
}

impl OmegaForm {
    fn new(curve: &EllipticCurveData, epsilon: i8) -> Result<Self> {
        if curve.case == CurveCase::Degenerate {
            return Err(EllipticError::Degenerate);
        }
        if !(curve.h > 0.0) {
            return Err(EllipticError::Domain(curve.h));
        }
        let eps = if epsilon < 0 { -1.0 } else { 1.0 };
        let (h, u) = (curve.h, curve.u);
        Ok(Self { wp: WeierstrassP::new(curve.inv)?, eps, c: eps * u * (2.0 / h).sqrt(), scale: (8.0 * h).sqrt() })
    }

    fn eval(&self, z: Complex64) -> Result<Complex64> {
        let (p, dp) = self.wp.eval(z)?;
        // 1/(℘′ + c) = (℘′ − c)/(q(℘) − c²) and q − c² = 4(℘ + 1/3)²(℘ − 2/3);
        // avoids the cancellation in ℘′ + c near the double pole
        let a = p + 1.0 / 3.0;
        Ok(-self.scale * self.eps * (dp - self.c) / (a * a * (p - 2.0 / 3.0) * 4.0))
    }

    fn pole(&self, omega: f64) -> Result<Complex64> {
        let target = Complex64::new(-self.c, 0.0);
        let z = self.wp.inverse(Complex64::new(omega, 0.0), Some(target))?;
        let (_, dp) = self.wp.eval(z)?;
        if (dp - target).norm() > 1e-8 * (1.0 + self.c.abs()) {
            return Err(EllipticError::Branch { expected: -self.c, found: format!("{dp}") });
        }
        Ok(z)
    }

    /// Circle radius around `z`, keeping every copy of `other` and of `z`
    /// itself at least 2.5 radii away.
    fn radius(&self, z: Complex64, other: Complex64) -> f64 {
        let gap = self.wp.reduce(other - z).norm();
        (RADIUS_FRACTION * self.wp.lattice().shortest()).min(0.4 * gap)
    }

    /// `∮ Ω dz` over the circle, trapezoid rule.
    fn loop_integral(&self, center: Complex64, radius: f64) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..NODES {
            let e = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / NODES as f64);
            acc += self.eval(center + e * radius)? * e;
        }
        Ok(acc * Complex64::new(0.0, 2.0 * PI * radius / NODES as f64))
    }
}

/// Poles of `Ω dz` with residues computed in closed form and by contour
/// integration. The single pole sits over the horizon and the double pole
/// over scri.
pub fn du_residues(curve: &EllipticCurveData, epsilon: i8) -> Result<ResidueReport> {
    let form = OmegaForm::new(curve, epsilon)?;
    let (h, eps, c) = (curve.h, form.eps, form.c);
    let two_pi_i = Complex64::new(0.0, 2.0 * PI);

    // simple zero of ℘′ + c where ℘ = 2/3: ℘″ = q′(2/3)/2 = 2
    let z1 = form.pole(2.0 / 3.0)?;
    let wpp = curve.inv.q_prime(Complex64::new(2.0 / 3.0, 0.0)).re / 2.0;
    let single = -form.scale * eps / wpp;

    // double zero where ℘ = −1/3: ℘′ + c = A t² + B t³ with
    // A = q″℘′/4, B = (q‴℘′² + q″℘″)/12 and residue −B/A²
    let z2 = form.pole(-1.0 / 3.0)?;
    let (w2, dp2) = (-1.0 / 3.0, -c);
    let (q2, q3) = (24.0 * w2, 24.0);
    let pp2 = curve.inv.q_prime(Complex64::new(w2, 0.0)).re / 2.0;
    let a = q2 * dp2 / 4.0;
    let b = (q3 * dp2 * dp2 + q2 * pp2) / 12.0;
    let double = -form.scale * eps * (-b / (a * a));

    let single_pole = Pole {
        z: z1,
        omega: 2.0 / 3.0,
        order: 1,
        residue: single,
        residue_contour: form.loop_integral(z1, form.radius(z1, z2))? / two_pi_i,
    };
    let double_pole = Pole {
        z: z2,
        omega: -1.0 / 3.0,
        order: 2,
        residue: double,
        residue_contour: form.loop_integral(z2, form.radius(z2, z1))? / two_pi_i,
    };
    let k = -(2.0 / h).sqrt();
    Ok(ResidueReport {
        epsilon: eps as i8,
        single_pole,
        double_pole,
        du_residues: [k * single_pole.residue, k * double_pole.residue],
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LoopKind {
    SinglePole,
    DoublePole,
    BothPoles,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeriodReport {
    pub kind: LoopKind,
    /// `∮ du` around the loop.
    pub period: Complex64,
    /// `|e^{u/2}` continued around the loop minus its start value| relative
    /// to the start value.
    pub exp_half_roundtrip: f64,
}

/// Integrates `du = −√(2/H) Ω dz` around a loop. Around a single pole the
/// result is `±4πi`, around both it is zero.
pub fn u_period_check(curve: &EllipticCurveData, epsilon: i8, kind: LoopKind) -> Result<PeriodReport> {
    let form = OmegaForm::new(curve, epsilon)?;
    let z1 = form.pole(2.0 / 3.0)?;
    let z2 = form.pole(-1.0 / 3.0)?;
    let (center, radius, nodes) = match kind {
        LoopKind::SinglePole => (z1, form.radius(z1, z2), NODES),
        LoopKind::DoublePole => (z2, form.radius(z2, z1), NODES),
        LoopKind::BothPoles => {
            // nearest copy of z2, then a circle through the gap between the
            // pair and every other copy
            let d = form.wp.reduce(z2 - z1);
            let center = z1 + d * 0.5;
            let inner = d.norm() * 0.5;
            let (a, b) = form.wp.lattice().reduced_basis();
            let mut outer = f64::INFINITY;
            for i in -2..=2 {
                for j in -2..=2 {
                    if i == 0 && j == 0 {
                        continue;
                    }
                    let shift = a * i as f64 + b * j as f64;
                    for p in [z1 + shift, z1 + d + shift] {
                        outer = outer.min((p - center).norm());
                    }
                }
            }
            if outer <= inner * (1.0 + 1e-6) {
                return Err(EllipticError::Mismatch("no circle separates the pole pair".into()));
            }
            let radius = (inner * outer).sqrt();
            // trapezoid error decays like (inner/radius)^n
            let n = (40.0 / (radius / inner).ln()).ceil() as usize;
            (center, radius, n.clamp(NODES, 1 << 16))
        }
    };
    let k = -(2.0 / curve.h).sqrt();
    // continue e^{u/2} node by node; the product telescopes to e^{period/2}
    let mut period = Complex64::new(0.0, 0.0);
    let mut value = Complex64::new(1.0, 0.0);
    let step = Complex64::new(0.0, 2.0 * PI * radius / nodes as f64);
    for n in 0..nodes {
        let e = Complex64::from_polar(1.0, 2.0 * PI * n as f64 / nodes as f64);
        let du = form.eval(center + e * radius)? * e * step * k;
        period += du;
        value *= (du * 0.5).exp();
    }
    Ok(PeriodReport { kind, period, exp_half_roundtrip: (value - 1.0).norm() })
}
