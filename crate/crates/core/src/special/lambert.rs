use std::f64::consts::E;

use serde::{Deserialize, Serialize};

use super::{Result, SpecialError};

/// Real branch of the Lambert W function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WBranch {
    /// W₀, the branch with W ≥ −1, defined on [−1/e, ∞).
    Principal,
    /// W₋₁, the branch with W ≤ −1, defined on [−1/e, 0).
    Lower,
}

const MAX_HALLEY: usize = 64;

/// Solves `w·exp(w) = z` on the requested real branch.
///
/// Arguments within a few ulps below −1/e are clamped onto the branch point,
/// so `-1.0 / E` evaluates to −1 on both branches.
pub fn lambert_w(branch: WBranch, z: f64) -> Result<f64> {
    if !z.is_finite() {
        return Err(SpecialError::LambertDomain { branch, z });
    }
    // 1 + e·z, fused so the branch point resolves cleanly.
    let lift = E.mul_add(z, 1.0);
    if lift < -4.0 * f64::EPSILON {
        return Err(SpecialError::LambertDomain { branch, z });
    }
    if branch == WBranch::Lower && z >= 0.0 {
        return Err(SpecialError::LambertDomain { branch, z });
    }
    if lift <= 4.0 * f64::EPSILON {
        return Ok(-1.0);
    }
    if z == 0.0 {
        return Ok(0.0);
    }

    let w0 = match branch {
        WBranch::Principal => principal_guess(z, lift),
        WBranch::Lower => lower_guess(z, lift),
    };
    Ok(halley(z, w0))
}

fn branch_point_series(p: f64) -> f64 {
    // w = −1 + p − p²/3 + 11p³/72 − 43p⁴/540 + 769p⁵/17280, p = ±sqrt(2(1 + e z))
    -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0 + p * (-43.0 / 540.0 + p * 769.0 / 17280.0))))
}

fn principal_guess(z: f64, lift: f64) -> f64 {
    if lift < 0.25 {
        branch_point_series((2.0 * lift).sqrt())
    } else if z < 3.0 {
        // Winitzki's approximation
        let l = z.ln_1p();
        l * (1.0 - (l.ln_1p()) / (2.0 + l))
    } else {
        let l1 = z.ln();
        let l2 = l1.ln();
        l1 - l2 + l2 / l1
    }
}

fn lower_guess(z: f64, lift: f64) -> f64 {
    if lift < 0.25 {
        branch_point_series(-(2.0 * lift).sqrt())
    } else {
        let l1 = (-z).ln();
        let l2 = (-l1).ln();
        l1 - l2 + l2 / l1
    }
}

fn halley(z: f64, mut w: f64) -> f64 {
    for _ in 0..MAX_HALLEY {
        let ew = w.exp();
        let f = w * ew - z;
        let wp1 = w + 1.0;
        if wp1 == 0.0 {
            break;
        }
        let denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        if denom == 0.0 || !denom.is_finite() {
            break;
        }
        let step = f / denom;
        w -= step;
        if step.abs() <= 4.0 * f64::EPSILON * (1.0 + w.abs()) {
            break;
        }
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn residual(w: f64, z: f64) -> f64 {
        (w * w.exp() - z).abs() / z.abs().max(1.0)
    }

    #[test]
    fn exact_points() {
        assert_eq!(lambert_w(WBranch::Principal, 0.0).unwrap(), 0.0);
        assert!((lambert_w(WBranch::Principal, E).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(lambert_w(WBranch::Principal, -1.0 / E).unwrap(), -1.0);
        assert_eq!(lambert_w(WBranch::Lower, -1.0 / E).unwrap(), -1.0);
    }

    #[test]
    fn domain_errors() {
        assert!(lambert_w(WBranch::Principal, -0.4).is_err());
        assert!(lambert_w(WBranch::Lower, 0.0).is_err());
        assert!(lambert_w(WBranch::Lower, 0.5).is_err());
        assert!(lambert_w(WBranch::Principal, f64::NAN).is_err());
    }

    #[test]
    fn near_branch_point() {
        for k in 1..40 {
            let z = -1.0 / E + 10f64.powi(-k) * 0.37;
            if z >= 0.0 {
                continue;
            }
            let w0 = lambert_w(WBranch::Principal, z).unwrap();
            let wm = lambert_w(WBranch::Lower, z).unwrap();
            assert!(w0 >= -1.0 && wm <= -1.0, "{z} {w0} {wm}");
            assert!(residual(w0, z) <= 1e-12 && residual(wm, z) <= 1e-12);
        }
    }

    #[test]
    fn lower_branch_near_zero() {
        let w = lambert_w(WBranch::Lower, -1e-300).unwrap();
        assert!(w < -690.0);
        assert!(residual(w, -1e-300) < 1e-12);
    }

    proptest! {
        #[test]
        fn principal_residual(z in -0.36787944117144..1e6f64) {
            let w = lambert_w(WBranch::Principal, z).unwrap();
            prop_assert!(w >= -1.0);
            prop_assert!(residual(w, z) <= 1e-12);
        }

        #[test]
        fn lower_residual(z in -0.36787944117144..-1e-12f64) {
            let w = lambert_w(WBranch::Lower, z).unwrap();
            prop_assert!(w <= -1.0);
            prop_assert!(residual(w, z) <= 1e-12);
        }
    }
}
