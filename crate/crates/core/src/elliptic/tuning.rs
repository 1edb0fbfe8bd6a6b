use std::f64::consts::PI;

use super::{curve_from_invariants, CurveCase, EllipticError, Result};

/// Sphere angle gained per real period of a B-segment geodesic:
/// `√(2H) · 2ω1·√(2/H) = 4ω1`.
pub fn advance_per_period(h: f64, u: f64) -> Result<f64> {
    let c = curve_from_invariants(h, u)?;
    if c.case != CurveCase::Case1Pos {
        return Err(EllipticError::Degenerate);
    }
    Ok(4.0 * c.real_half_period().expect("non-degenerate curves carry a lattice"))
}

/// `U > 0` for which the advance per period is `2π·(1 + p/q)`, so that the
/// geodesic returns to its starting phase after `q` passes.
///
/// The advance depends on `U²/H` only and increases from `2π` (at `U → 0`)
/// to infinity (at `27U² → 8H`).
pub fn tune_closure(h: f64, p: u32, q: u32) -> Result<f64> {
    if q == 0 || p == 0 {
        return Err(EllipticError::Fit("closure needs a positive fraction"));
    }
    let target = 2.0 * PI * (1.0 + p as f64 / q as f64);
    let f = |ratio: f64| advance_per_period(h, (ratio * h).sqrt()).map(|a| a - target);
    let (mut lo, mut hi) = (1e-12, 8.0 / 27.0 * (1.0 - 1e-9));
    let (mut flo, fhi) = (f(lo)?, f(hi)?);
    if flo > 0.0 || fhi < 0.0 {
        return Err(EllipticError::Fit("target advance out of range"));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid)?;
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-17 {
            break;
        }
    }
    Ok((0.5 * (lo + hi) * h).sqrt())
}
