use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Roots of `q(ω) = 4ω³ − g2·ω − g3` for real invariants.
///
/// Real roots come first in ascending order; a complex pair follows with the
/// positive imaginary part first.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CubicRootSet {
    pub roots: [Complex64; 3],
    /// `16(g2³ − 27 g3²)`.
    pub discriminant: f64,
    pub real_count: usize,
    /// Multiplicity of each entry of `roots` (1, 2 or 3).
    pub multiplicity: [u8; 3],
}

impl CubicRootSet {
    pub fn is_degenerate(&self) -> bool {
        self.multiplicity.iter().any(|&m| m > 1)
    }

    /// Real roots in ascending order.
    pub fn real_roots(&self) -> Vec<f64> {
        self.roots[..self.real_count].iter().map(|r| r.re).collect()
    }
}

/// Compensated `16(g2³ − 27 g3²)`.
pub(crate) fn discriminant(g2: f64, g3: f64) -> f64 {
    let (a_hi, a_lo) = two_prod(g2, g2);
    let (c_hi, c_lo) = two_prod(a_hi, g2);
    let cube_lo = c_lo + a_lo * g2;
    let (s_hi, s_lo) = two_prod(g3, g3);
    let (t_hi, t_lo) = two_prod(27.0, s_hi);
    let sq_lo = t_lo + 27.0 * s_lo;
    let (d_hi, d_lo) = two_sum(c_hi, -t_hi);
    16.0 * (d_hi + (d_lo + cube_lo - sq_lo))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

/// Roots of `4ω³ − g2ω − g3`, closed form followed by Newton polishing.
pub fn cubic_roots(g2: f64, g3: f64) -> CubicRootSet {
    let disc = discriminant(g2, g3);
    // depressed form t³ + p t + q = 0
    let p = -g2 / 4.0;
    let q = -g3 / 4.0;
    let scale = 16.0 * (g2.abs().powi(3) + 27.0 * g3 * g3);
    let tiny = 1e-13 * scale.max(f64::MIN_POSITIVE);

    let mut out = if disc.abs() <= tiny {
        if p.abs() <= 1e-15 * (1.0 + q.abs()) {
            CubicRootSet {
                roots: [Complex64::new(0.0, 0.0); 3],
                discriminant: disc,
                real_count: 3,
                multiplicity: [3; 3],
            }
        } else {
            let simple = 3.0 * q / p;
            let double = -1.5 * q / p;
            let mut roots = [double, double, simple];
            let mut mult = [2u8, 2, 1];
            if simple < double {
                roots = [simple, double, double];
                mult = [1, 2, 2];
            }
            CubicRootSet {
                roots: roots.map(|r| Complex64::new(r, 0.0)),
                discriminant: disc,
                real_count: 3,
                multiplicity: mult,
            }
        }
    } else if disc > 0.0 {
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = ((3.0 * q / (2.0 * p)) * (-3.0 / p).sqrt()).clamp(-1.0, 1.0);
        let theta = arg.acos() / 3.0;
        let mut r = [0.0; 3];
        for (k, slot) in r.iter_mut().enumerate() {
            *slot = m * (theta - 2.0 * PI * k as f64 / 3.0).cos();
        }
        r.sort_by(|a, b| a.total_cmp(b));
        CubicRootSet {
            roots: r.map(|x| Complex64::new(x, 0.0)),
            discriminant: disc,
            real_count: 3,
            multiplicity: [1; 3],
        }
    } else {
        let d = (q * q / 4.0 + p * p * p / 27.0).sqrt();
        let a = -(q.signum() * (q.abs() / 2.0 + d)).cbrt();
        let a = if q == 0.0 { (d).cbrt() } else { a };
        let b = if a == 0.0 { 0.0 } else { -p / (3.0 * a) };
        let re = -(a + b) / 2.0;
        let im = 3f64.sqrt() / 2.0 * (a - b).abs();
        CubicRootSet {
            roots: [
                Complex64::new(a + b, 0.0),
                Complex64::new(re, im),
                Complex64::new(re, -im),
            ],
            discriminant: disc,
            real_count: 1,
            multiplicity: [1; 3],
        }
    };

    for (root, &m) in out.roots.iter_mut().zip(out.multiplicity.iter()) {
        if m == 1 {
            *root = polish(g2, g3, *root);
        }
    }
    if out.real_count == 1 {
        out.roots[0].im = 0.0;
        out.roots[2] = out.roots[1].conj();
    } else {
        for r in out.roots.iter_mut() {
            r.im = 0.0;
        }
    }
    out
}

fn polish(g2: f64, g3: f64, mut w: Complex64) -> Complex64 {
    let f = |w: Complex64| w * w * w * 4.0 - w * g2 - g3;
    let mut best = f(w).norm();
    for _ in 0..8 {
        let d = w * w * 12.0 - g2;
        if d.norm() == 0.0 {
            break;
        }
        let cand = w - f(w) / d;
        let r = f(cand).norm();
        if r < best {
            best = r;
            w = cand;
        } else {
            break;
        }
    }
    w
}
