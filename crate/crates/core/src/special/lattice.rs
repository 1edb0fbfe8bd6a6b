use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{cubic_roots, Result, SpecialError, WeierstrassInvariants};

/// Period lattice `Λ = 2ω1·ℤ + 2ω3·ℤ` of a Weierstrass curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeriodLattice {
    pub omega1: Complex64,
    pub omega3: Complex64,
}

impl PeriodLattice {
    pub fn new(omega1: Complex64, omega3: Complex64) -> Self {
        Self { omega1, omega3 }
    }

    /// The two lattice generators `(2ω1, 2ω3)`.
    pub fn generators(&self) -> (Complex64, Complex64) {
        (self.omega1 * 2.0, self.omega3 * 2.0)
    }

    /// `Im(ω3/ω1)`, positive for a correctly oriented lattice.
    pub fn orientation(&self) -> f64 {
        (self.omega3 / self.omega1).im
    }

    /// Gauss-reduced basis of the same lattice; the first vector is a
    /// shortest nonzero lattice vector.
    pub fn reduced_basis(&self) -> (Complex64, Complex64) {
        let (mut a, mut b) = self.generators();
        for _ in 0..256 {
            if b.norm_sqr() < a.norm_sqr() {
                std::mem::swap(&mut a, &mut b);
            }
            let m = ((b * a.conj()).re / a.norm_sqr()).round();
            if m == 0.0 {
                break;
            }
            b -= a * m;
        }
        (a, b)
    }

    /// Length of the shortest nonzero lattice vector.
    pub fn shortest(&self) -> f64 {
        self.reduced_basis().0.norm()
    }

    /// Nearest lattice point to `z`.
    pub fn nearest_point(&self, z: Complex64) -> Complex64 {
        nearest_in_basis(self.reduced_basis(), z)
    }

    /// `z` minus its nearest lattice point (a representative in the
    /// Voronoi cell of the origin).
    pub fn reduce(&self, z: Complex64) -> Complex64 {
        z - self.nearest_point(z)
    }
}

pub(crate) fn nearest_in_basis((a, b): (Complex64, Complex64), z: Complex64) -> Complex64 {
    // real coordinates of z in the basis (a, b)
    let ca = (z * b.conj()).im / (a * b.conj()).im;
    let cb = (z * a.conj()).im / (b * a.conj()).im;
    let (fa, fb) = (ca.floor(), cb.floor());
    let mut best = Complex64::new(0.0, 0.0);
    let mut best_d = f64::INFINITY;
    for i in -1..=2 {
        for j in -1..=2 {
            let p = a * (fa + i as f64) + b * (fb + j as f64);
            let d = (z - p).norm_sqr();
            if d < best_d {
                best_d = d;
                best = p;
            }
        }
    }
    best
}

/// Arithmetic–geometric mean of two positive reals.
pub fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..64 {
        if (a - b).abs() <= 1e-16 * a.abs() {
            break;
        }
        let next = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next;
    }
    0.5 * (a + b)
}

/// Carlson's symmetric integral `R_F(x, y, z) = ½∫₀^∞ dt / √((t+x)(t+y)(t+z))`
/// for complex arguments off the negative real axis (arguments on the axis
/// take the limit from above).
pub fn carlson_rf(mut x: Complex64, mut y: Complex64, mut z: Complex64) -> Complex64 {
    for _ in 0..200 {
        let a = (x + y + z) / 3.0;
        let dev = (a - x).norm().max((a - y).norm()).max((a - z).norm());
        if dev <= 1e-3 * a.norm() {
            let xx = Complex64::new(1.0, 0.0) - x / a;
            let yy = Complex64::new(1.0, 0.0) - y / a;
            let zz = -(xx + yy);
            let e2 = xx * yy - zz * zz;
            let e3 = xx * yy * zz;
            return (Complex64::new(1.0, 0.0) - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0
                - e2 * e3 * (3.0 / 44.0))
                / a.sqrt();
        }
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lambda = sx * sy + sy * sz + sz * sx;
        x = (x + lambda) * 0.25;
        y = (y + lambda) * 0.25;
        z = (z + lambda) * 0.25;
    }
    Complex64::new(f64::NAN, f64::NAN)
}

/// Half-periods of the lattice for real invariants with nonzero discriminant.
///
/// For three real roots `e1 < e2 < e3` the lattice is rectangular with `ω1`
/// real and `ω3` purely imaginary; for one real root it is rhombic with `2ω1`
/// real and `2ω3 = ω1 + (imaginary half-period)`.
pub fn half_periods(inv: &WeierstrassInvariants) -> Result<PeriodLattice> {
    let roots = cubic_roots(inv.g2, inv.g3);
    if roots.is_degenerate() {
        return Err(SpecialError::Degenerate { discriminant: roots.discriminant });
    }
    if roots.real_count == 3 {
        let [e1, e2, e3] = roots.real_roots()[..] else { unreachable!() };
        let w1 = PI / (2.0 * agm((e3 - e1).sqrt(), (e3 - e2).sqrt()));
        let w3 = PI / (2.0 * agm((e3 - e1).sqrt(), (e2 - e1).sqrt()));
        Ok(PeriodLattice::new(Complex64::new(w1, 0.0), Complex64::new(0.0, w3)))
    } else {
        let a = roots.roots[0].re;
        let c = Complex64::new(a, 0.0) - roots.roots[1];
        let modulus = c.norm().sqrt();
        let real_half = PI / (2.0 * agm(c.sqrt().re, modulus));
        let imag_half = PI / (2.0 * agm((-c).sqrt().re, modulus));
        let w1 = Complex64::new(real_half, 0.0);
        let w3 = Complex64::new(real_half, imag_half) * 0.5;
        Ok(PeriodLattice::new(w1, w3))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn carlson_known_values() {
        // R_F(0, 1, 2) = 1.3110287771461
        let v = carlson_rf(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), Complex64::new(2.0, 0.0));
        assert!((v.re - 1.311_028_777_146_1).abs() < 1e-12 && v.im.abs() < 1e-15);
        // R_F(x, x, x) = 1/√x
        let x = Complex64::new(0.3, 0.7);
        assert!((carlson_rf(x, x, x) - x.sqrt().inv()).norm() < 1e-14);
    }

    #[test]
    fn agm_of_one_and_root_two() {
        // Gauss's constant: agm(1, √2) = 1.19814023473559220744
        assert!((agm(1.0, 2f64.sqrt()) - 1.198_140_234_735_592_2).abs() < 1e-15);
    }

    #[test]
    fn degenerate_has_no_lattice() {
        let inv = WeierstrassInvariants::new(4.0 / 3.0, 8.0 / 27.0);
        assert!(matches!(half_periods(&inv), Err(SpecialError::Degenerate { .. })));
    }

    #[test]
    fn rectangular_when_three_real_roots() {
        let inv = WeierstrassInvariants::new(4.0 / 3.0, 8.0 / 27.0 - 0.02);
        let l = half_periods(&inv).unwrap();
        let (a, b) = l.generators();
        assert!(a.im.abs() < 1e-10 && b.re.abs() < 1e-10);
        assert!(l.orientation() > 0.0);
    }

    #[test]
    fn reduction_finds_voronoi_representative() {
        let l = PeriodLattice::new(Complex64::new(1.0, 0.0), Complex64::new(0.4, 0.9));
        let (a, b) = l.generators();
        let z = Complex64::new(0.13, -0.21);
        let far = z + a * 7.0 - b * 3.0;
        assert!((l.reduce(far) - z).norm() < 1e-12);
    }
}
