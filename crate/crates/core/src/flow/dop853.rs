//! Dormand–Prince 8(5,3) with its seventh-order continuous extension and a
//! PI step-size controller.

use super::tableau::{A, B, C, D, E3, E5, INTERPOLATOR_POWER, N_STAGES, N_STAGES_EXTENDED};

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 10.0;
/// Integral gain exponent `1/8 − 0.75β` and proportional gain `β`.
const BETA: f64 = 0.04;
const ALPHA: f64 = 1.0 / 8.0 - 0.75 * BETA;

pub(crate) type Vector<const N: usize> = [f64; N];

/// One attempted step: the candidate end point and its scaled error.
pub(crate) struct Attempt<const N: usize> {
    pub y_new: Vector<N>,
    pub f_new: Vector<N>,
    pub k: [Vector<N>; N_STAGES + 1],
    pub error: f64,
}

fn axpy<const N: usize>(y: &Vector<N>, k: &[Vector<N>], coeffs: &[f64], h: f64) -> Vector<N> {
    let mut out = *y;
    for (kj, &a) in k.iter().zip(coeffs) {
        if a != 0.0 {
            for i in 0..N {
                out[i] += h * a * kj[i];
            }
        }
    }
    out
}

pub(crate) fn attempt<const N: usize, E>(
    rhs: &mut impl FnMut(f64, &Vector<N>) -> Result<Vector<N>, E>,
    s: f64,
    y: &Vector<N>,
    f: &Vector<N>,
    h: f64,
    rtol: f64,
    atol: f64,
) -> Result<Attempt<N>, E> {
    let mut k = [[0.0; N]; N_STAGES + 1];
    k[0] = *f;
    for st in 1..N_STAGES {
        let yi = axpy(y, &k[..st], &A[st][..st], h);
        k[st] = rhs(s + C[st] * h, &yi)?;
    }
    let y_new = axpy(y, &k[..N_STAGES], &B, h);
    let f_new = rhs(s + h, &y_new)?;
    k[N_STAGES] = f_new;

    let mut e5 = 0.0;
    let mut e3 = 0.0;
    for i in 0..N {
        let scale = atol + rtol * y[i].abs().max(y_new[i].abs());
        let (mut a5, mut a3) = (0.0, 0.0);
        for (j, kj) in k.iter().enumerate() {
            a5 += E5[j] * kj[i];
            a3 += E3[j] * kj[i];
        }
        e5 += (a5 / scale).powi(2);
        e3 += (a3 / scale).powi(2);
    }
    let error = if e5 == 0.0 && e3 == 0.0 { 0.0 } else { h.abs() * e5 / ((e5 + 0.01 * e3) * N as f64).sqrt() };
    Ok(Attempt { y_new, f_new, k, error })
}

/// Continuous extension over one accepted step.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseStep<const N: usize> {
    pub s0: f64,
    pub h: f64,
    pub y0: Vector<N>,
    pub coeffs: [Vector<N>; INTERPOLATOR_POWER],
}

impl<const N: usize> DenseStep<N> {
    pub fn s1(&self) -> f64 {
        self.s0 + self.h
    }

    pub fn eval(&self, s: f64) -> Vector<N> {
        let x = (s - self.s0) / self.h;
        let mut y = [0.0; N];
        for (i, f) in self.coeffs.iter().rev().enumerate() {
            for c in 0..N {
                y[c] += f[c];
                y[c] *= if i % 2 == 0 { x } else { 1.0 - x };
            }
        }
        for c in 0..N {
            y[c] += self.y0[c];
        }
        y
    }
}

pub(crate) fn dense<const N: usize, E>(
    rhs: &mut impl FnMut(f64, &Vector<N>) -> Result<Vector<N>, E>,
    s0: f64,
    y0: &Vector<N>,
    h: f64,
    step: &Attempt<N>,
) -> Result<DenseStep<N>, E> {
    let mut k = [[0.0; N]; N_STAGES_EXTENDED];
    k[..=N_STAGES].copy_from_slice(&step.k);
    for st in N_STAGES + 1..N_STAGES_EXTENDED {
        let yi = axpy(y0, &k[..st], &A[st][..st], h);
        k[st] = rhs(s0 + C[st] * h, &yi)?;
    }
    let mut coeffs = [[0.0; N]; INTERPOLATOR_POWER];
    let f_old = k[0];
    for i in 0..N {
        let dy = step.y_new[i] - y0[i];
        coeffs[0][i] = dy;
        coeffs[1][i] = h * f_old[i] - dy;
        coeffs[2][i] = 2.0 * dy - h * (step.f_new[i] + f_old[i]);
        for (r, drow) in D.iter().enumerate() {
            let mut acc = 0.0;
            for (j, kj) in k.iter().enumerate() {
                acc += drow[j] * kj[i];
            }
            coeffs[3 + r][i] = h * acc;
        }
    }
    Ok(DenseStep { s0, h, y0: *y0, coeffs })
}

/// PI controller on the embedded error estimate.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Controller {
    err_prev: f64,
    rejected: bool,
}

impl Default for Controller {
    fn default() -> Self {
        Self { err_prev: 1e-4, rejected: false }
    }
}

impl Controller {
    /// Returns whether the step is accepted and the factor for the next `h`.
    pub fn judge(&mut self, error: f64) -> (bool, f64) {
        if !error.is_finite() {
            self.rejected = true;
            return (false, MIN_FACTOR);
        }
        if error <= 1.0 {
            let mut factor = if error == 0.0 {
                MAX_FACTOR
            } else {
                (SAFETY * error.powf(-ALPHA) * self.err_prev.powf(BETA)).clamp(MIN_FACTOR, MAX_FACTOR)
            };
            if self.rejected {
                factor = factor.min(1.0);
            }
            self.err_prev = error.max(1e-4);
            self.rejected = false;
            (true, factor)
        } else {
            self.rejected = true;
            (false, (SAFETY * error.powf(-1.0 / 8.0)).max(MIN_FACTOR))
        }
    }

    pub fn reset(&mut self) {
        *self = Self::default();
    }
}

/// Hairer's starting step heuristic for an eighth-order method.
pub(crate) fn initial_step<const N: usize, E>(
    rhs: &mut impl FnMut(f64, &Vector<N>) -> Result<Vector<N>, E>,
    s: f64,
    y: &Vector<N>,
    f: &Vector<N>,
    direction: f64,
    rtol: f64,
    atol: f64,
    max_h: f64,
) -> f64 {
    let norm = |v: &Vector<N>, base: &Vector<N>| {
        (v.iter().zip(base).map(|(a, b)| (a / (atol + rtol * b.abs())).powi(2)).sum::<f64>() / N as f64).sqrt()
    };
    let d0 = norm(y, y);
    let d1 = norm(f, y);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    let h0 = h0.min(max_h);
    let mut y1 = *y;
    for i in 0..N {
        y1[i] += direction * h0 * f[i];
    }
    let d2 = match rhs(s + direction * h0, &y1) {
        Ok(f1) => {
            let diff: Vector<N> = std::array::from_fn(|i| f1[i] - f[i]);
            norm(&diff, y) / h0
        }
        Err(_) => return h0 * 1e-2,
    };
    let h1 = if d1 <= 1e-15 && d2 <= 1e-15 { (h0 * 1e-3).max(1e-6) } else { (0.01 / d1.max(d2)).powf(1.0 / 8.0) };
    (100.0 * h0).min(h1).min(max_h)
}
