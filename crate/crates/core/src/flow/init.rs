use serde::{Deserialize, Serialize};

use crate::atlas::{hamiltonian, CotangentState};

use super::policy::conserved_u;
use super::{ConservedSet, FlowError, SphereGeodesic};

/// Sign of `∂H/∂m₂` at the start, i.e. of the velocity of the second
/// coordinate (`dω/ds` in the Eddington–Finkelstein charts).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Increasing,
    Decreasing,
}

impl Direction {
    pub fn sign(self) -> f64 {
        match self {
            Direction::Increasing => 1.0,
            Direction::Decreasing => -1.0,
        }
    }
}

/// Completes the second momentum of `string_start` so that `H_Σ = H₂`,
/// holding the first momentum fixed. `H` is quadratic in that component,
/// and `direction` picks the root.
pub fn init_null(
    h2: f64,
    string_start: &CotangentState<f64>,
    direction: Direction,
) -> Result<(ConservedSet, SphereGeodesic, CotangentState<f64>), FlowError> {
    if !(h2 >= 0.0) || !h2.is_finite() {
        return Err(FlowError::Argument("sphere energy must be non-negative"));
    }
    string_start.validate()?;
    let at = |m2: f64| {
        let mut s = *string_start;
        s.momentum[1] = m2;
        hamiltonian(&s)
    };
    let c = at(0.0)?;
    let (hp, hm) = (at(1.0)?, at(-1.0)?);
    let a = 0.5 * (hp + hm) - c;
    let b = 0.5 * (hp - hm);
    let scale = a.abs() + b.abs() + c.abs() + h2;
    let sigma = direction.sign();
    let m2 = if a.abs() <= 1e-14 * scale {
        if b == 0.0 {
            return Err(FlowError::Infeasible { h2, discriminant: 0.0 });
        }
        (h2 - c) / b
    } else {
        let disc = b * b - 4.0 * a * (c - h2);
        if disc < 0.0 {
            return Err(FlowError::Infeasible { h2, discriminant: disc });
        }
        let root = sigma * disc.sqrt();
        // both algebraically equal; pick the one without cancellation
        if (b + root).abs() >= (root - b).abs() {
            2.0 * (h2 - c) / (b + root)
        } else {
            (root - b) / (2.0 * a)
        }
    };
    let mut state = *string_start;
    state.momentum[1] = m2;
    let conserved = ConservedSet { h: h2, u: conserved_u(&state), h2 };
    Ok((conserved, SphereGeodesic::equatorial(h2), state))
}
