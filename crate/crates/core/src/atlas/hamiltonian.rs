use super::transition::ks_radius;
use super::{q_small, q_small_prime, AtlasError, ChartId, CotangentState, Scalar};

/// Partial derivatives of the Hamiltonian with respect to the two
/// coordinates and the two momenta of a chart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gradient<S> {
    pub position: [S; 2],
    pub momentum: [S; 2],
}

/// `H = ½ g^{ab} p_a p_b` in the chart of `state`.
pub fn hamiltonian<S: Scalar>(state: &CotangentState<S>) -> Result<S, AtlasError> {
    state.validate()?;
    let [a, b] = state.position;
    let [m1, m2] = state.momentum;
    let h = match state.chart {
        ChartId::Schw => {
            let r = b;
            (r * r * r * m1 * m1 / (r - 1.0) - r * (r - 1.0) * m2 * m2) * 0.5
        }
        ChartId::EfAdv | ChartId::EfRet => m2 * (m1 + q_small(b) * m2),
        ChartId::Ks => {
            let g = ks_g(state)?;
            -(g * m1 * m2) * 0.5
        }
        ChartId::Xu | ChartId::Xv => {
            let x = b;
            m2 * ((one::<S>() - x * x) * m2 - x * x * x * m1 * 4.0) / 8.0
        }
        ChartId::Xt => {
            let x = b;
            let x2 = x * x;
            x2 * x2 * x2 * m1 * m1 / ((x2 - 1.0) * 2.0) - (x2 - 1.0) * m2 * m2 / 8.0
        }
        ChartId::Xp | ChartId::Xq => {
            let (p, x) = (a, b);
            m2 * ((one::<S>() - x * x) * m2 - p * x * x * x * m1 * 2.0) / 8.0
        }
        ChartId::Yp | ChartId::Yq => {
            let (p, y) = (a, b);
            p * m1 * m2 * 0.5 + (y * y * y - y * y) * m2 * m2 * 0.5
        }
    };
    Ok(h)
}

pub fn hamiltonian_gradient<S: Scalar>(state: &CotangentState<S>) -> Result<Gradient<S>, AtlasError> {
    state.validate()?;
    let zero = S::from_f64(0.0);
    let [a, b] = state.position;
    let [m1, m2] = state.momentum;
    let grad = match state.chart {
        ChartId::Schw => {
            let r = b;
            let rm = r - 1.0;
            Gradient {
                position: [zero, (m1 * m1 * r * r * (r * 2.0 - 3.0) / (rm * rm) - (r * 2.0 - 1.0) * m2 * m2) * 0.5],
                momentum: [r * r * r * m1 / rm, -(r * rm * m2)],
            }
        }
        ChartId::EfAdv | ChartId::EfRet => Gradient {
            position: [zero, q_small_prime(b) * m2 * m2],
            momentum: [m2, m1 + q_small(b) * m2 * 2.0],
        },
        ChartId::Ks => {
            let (p, q) = (a, b);
            let r = ks_radius(state)?;
            let g = r * r * r * (r - 1.0).exp();
            let k = -(m1 * m2 * r * (r + 3.0)) * 0.5;
            Gradient { position: [k * q, k * p], momentum: [-(g * m2) * 0.5, -(g * m1) * 0.5] }
        }
        ChartId::Xu | ChartId::Xv => {
            let x = b;
            let x2 = x * x;
            Gradient {
                position: [zero, -(m1 * m2 * x2) * 1.5 - x * m2 * m2 * 0.25],
                momentum: [-(x2 * x * m2) * 0.5, ((one::<S>() - x2) * m2 - m1 * x2 * x * 2.0) * 0.25],
            }
        }
        ChartId::Xt => {
            let x = b;
            let x2 = x * x;
            let d = x2 - 1.0;
            let x5 = x2 * x2 * x;
            Gradient {
                position: [zero, m1 * m1 * x5 * (x2 * 4.0 - 6.0) / (d * d * 2.0) - x * m2 * m2 * 0.25],
                momentum: [x5 * x * m1 / d, -(d * m2) * 0.25],
            }
        }
        ChartId::Xp | ChartId::Xq => {
            let (p, x) = (a, b);
            let x2 = x * x;
            Gradient {
                position: [-(x2 * x * m1 * m2) * 0.25, -(x * m2 * m2) * 0.25 - p * x2 * m1 * m2 * 0.75],
                momentum: [-(p * x2 * x * m2) * 0.25, ((one::<S>() - x2) * m2 - p * x2 * x * m1) * 0.25],
            }
        }
        ChartId::Yp | ChartId::Yq => {
            let (p, y) = (a, b);
            Gradient {
                position: [m1 * m2 * 0.5, (y * y * 3.0 - y * 2.0) * m2 * m2 * 0.5],
                momentum: [p * m2 * 0.5, p * m1 * 0.5 + (y * y * y - y * y) * m2],
            }
        }
    };
    Ok(grad)
}

/// Hamilton's equations `(ċ, ṁ) = (∂H/∂m, −∂H/∂c)`.
pub fn vector_field<S: Scalar>(state: &CotangentState<S>) -> Result<[S; 4], AtlasError> {
    let g = hamiltonian_gradient(state)?;
    Ok([g.momentum[0], g.momentum[1], -g.position[0], -g.position[1]])
}

fn one<S: Scalar>() -> S {
    S::from_f64(1.0)
}

fn ks_g<S: Scalar>(state: &CotangentState<S>) -> Result<S, AtlasError> {
    let r = ks_radius(state)?;
    Ok(r * r * r * (r - 1.0).exp())
}
