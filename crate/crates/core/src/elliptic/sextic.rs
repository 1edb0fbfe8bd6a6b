use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::special::{poly_eval, poly_roots};

use super::{CurveCase, EllipticCurveData, EllipticError, Result};

/// `S(x) = U²x⁶ − 2Hx² + 2H`, the right side of `(2 dx/ds)² = S(x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SexticData {
    pub h: f64,
    pub u: f64,
    /// Ascending coefficients of `S`.
    pub coefficients: [f64; 7],
    /// Roots of `S`; fewer than six when `U = 0`.
    pub roots: Vec<Complex64>,
    pub distinct: bool,
    /// Roots are closed under `x → −x`.
    pub paired: bool,
}

impl SexticData {
    pub fn eval(&self, x: Complex64) -> Complex64 {
        let c: Vec<Complex64> = self.coefficients.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        poly_eval(&c, x)
    }
}

pub fn sextic_from_invariants(h: f64, u: f64) -> SexticData {
    let coefficients = [2.0 * h, 0.0, -2.0 * h, 0.0, 0.0, 0.0, u * u];
    let c: Vec<Complex64> = coefficients.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let roots = poly_roots(&c);
    let scale = roots.iter().map(|r| r.norm()).fold(0.0, f64::max).max(1e-300);
    let sep = 1e-6 * scale;
    let distinct = roots.len() == 6
        && roots.iter().enumerate().all(|(i, a)| roots[i + 1..].iter().all(|b| (a - b).norm() > sep));
    let paired = roots.iter().all(|a| roots.iter().any(|b| (a + b).norm() <= sep));
    SexticData { h, u, coefficients, roots, distinct, paired }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrespondenceReport {
    /// Largest relative residual of `H·x⁶·q(x⁻² − 1/3) = 2S(x)`.
    pub identity_residual: f64,
    /// Largest distance from a sextic root to the nearest `±(e + 1/3)^{−1/2}`.
    pub root_match: f64,
    /// Largest `|q(x*⁻² − 1/3)|` over sextic roots `x*`.
    pub substitution_residual: f64,
    pub points: usize,
}

/// Checks that the sextic is the cubic pulled back along `ω = x⁻² − 1/3`.
pub fn cubic_sextic_correspondence(
    curve: &EllipticCurveData,
    sextic: &SexticData,
    seed: u64,
) -> Result<CorrespondenceReport> {
    if curve.case == CurveCase::Degenerate || !sextic.distinct {
        return Err(EllipticError::Degenerate);
    }
    if curve.h != sextic.h || curve.u != sextic.u {
        return Err(EllipticError::Mismatch(format!(
            "curve has (H, U) = ({}, {}), sextic ({}, {})",
            curve.h, curve.u, sextic.h, sextic.u
        )));
    }
    let h = curve.h;
    let third = Complex64::new(1.0 / 3.0, 0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = 100;
    let mut identity_residual: f64 = 0.0;
    for _ in 0..points {
        let x = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        if x.norm() < 1e-3 {
            continue;
        }
        let w = x.powi(-2) - third;
        let lhs = x.powi(6) * curve.inv.q(w) * h;
        let rhs = sextic.eval(x) * 2.0;
        let scale = 1.0 + (x.powi(6) * curve.u * curve.u).norm() + 2.0 * h * (1.0 + x.norm_sqr());
        identity_residual = identity_residual.max((lhs - rhs).norm() / scale);
    }

    let expected: Vec<Complex64> = curve
        .roots
        .roots
        .iter()
        .flat_map(|&e| {
            let x = (e + third).powf(-0.5);
            [x, -x]
        })
        .collect();
    let mut root_match: f64 = 0.0;
    let mut substitution_residual: f64 = 0.0;
    for r in &sextic.roots {
        let d = expected.iter().map(|e| (e - r).norm()).fold(f64::INFINITY, f64::min);
        root_match = root_match.max(d / r.norm());
        substitution_residual = substitution_residual.max(curve.inv.q(r.powi(-2) - third).norm());
    }
    if identity_residual > 1e-10 || root_match > 1e-8 {
        return Err(EllipticError::Mismatch(format!(
            "identity residual {identity_residual:e}, root mismatch {root_match:e}"
        )));
    }
    Ok(CorrespondenceReport { identity_residual, root_match, substitution_residual, points })
}
