use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::cubic::discriminant;
use super::lattice::nearest_in_basis;
use super::{carlson_rf, cubic_roots, half_periods, CubicRootSet, PeriodLattice, Result, SpecialError};

/// Invariants of the Weierstrass cubic `4ω³ − g2·ω − g3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeierstrassInvariants {
    pub g2: f64,
    pub g3: f64,
}

impl WeierstrassInvariants {
    pub fn new(g2: f64, g3: f64) -> Self {
        Self { g2, g3 }
    }

    /// `16(g2³ − 27 g3²)`, evaluated with compensated products.
    pub fn discriminant(&self) -> f64 {
        discriminant(self.g2, self.g3)
    }

    pub fn roots(&self) -> CubicRootSet {
        cubic_roots(self.g2, self.g3)
    }

    /// `q(ω) = 4ω³ − g2 ω − g3`.
    pub fn q(&self, w: Complex64) -> Complex64 {
        w * w * w * 4.0 - w * self.g2 - self.g3
    }

    /// `q′(ω) = 12ω² − g2`.
    pub fn q_prime(&self, w: Complex64) -> Complex64 {
        w * w * 12.0 - self.g2
    }
}

/// Numerical knobs for ℘ evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeierstrassConfig {
    /// Points closer than `pole_radius × shortest period` to a lattice
    /// point are rejected as poles.
    pub pole_radius: f64,
    /// Number of Laurent coefficients kept beyond the `z⁻²` term.
    pub series_terms: usize,
    /// The series is evaluated at `|z| ≤ series_fraction × shortest period`;
    /// larger arguments are halved and recovered by duplication.
    pub series_fraction: f64,
}

impl Default for WeierstrassConfig {
    fn default() -> Self {
        Self { pole_radius: 1e-9, series_terms: 24, series_fraction: 0.25 }
    }
}

/// ℘ and ℘′ for a fixed pair of invariants, with the lattice and Laurent
/// coefficients precomputed.
#[derive(Debug, Clone)]
pub struct WeierstrassP {
    inv: WeierstrassInvariants,
    lattice: PeriodLattice,
    basis: (Complex64, Complex64),
    shortest: f64,
    /// c_k for k = 2.. in `℘ = z⁻² + Σ c_k z^{2k−2}`
    coeffs: Vec<f64>,
    roots: CubicRootSet,
    /// Half-periods `ω` with `℘(ω)` snapped to the matching root.
    half: [(Complex64, Complex64); 3],
    config: WeierstrassConfig,
}

impl WeierstrassP {
    pub fn new(inv: WeierstrassInvariants) -> Result<Self> {
        Self::with_config(inv, WeierstrassConfig::default())
    }

    pub fn with_config(inv: WeierstrassInvariants, config: WeierstrassConfig) -> Result<Self> {
        let lattice = half_periods(&inv)?;
        let basis = lattice.reduced_basis();
        let shortest = basis.0.norm();
        let zero = Complex64::new(0.0, 0.0);
        let mut wp = Self {
            inv,
            lattice,
            basis,
            shortest,
            coeffs: laurent_coefficients(inv.g2, inv.g3, config.series_terms),
            roots: inv.roots(),
            half: [(zero, zero); 3],
            config,
        };
        let (a, b) = basis;
        for (k, w) in [a * 0.5, b * 0.5, (a + b) * 0.5].into_iter().enumerate() {
            let (p, _) = wp.eval_near_origin(w)?;
            let e = wp.roots.roots.iter().copied().min_by(|x, y| (x - p).norm().total_cmp(&(y - p).norm())).unwrap_or(p);
            wp.half[k] = (w, e);
        }
        Ok(wp)
    }

    pub fn invariants(&self) -> WeierstrassInvariants {
        self.inv
    }

    pub fn lattice(&self) -> PeriodLattice {
        self.lattice
    }

    pub fn roots(&self) -> &CubicRootSet {
        &self.roots
    }

    /// Representative of `z` in the Voronoi cell of the origin.
    pub fn reduce(&self, z: Complex64) -> Complex64 {
        z - nearest_in_basis(self.basis, z)
    }

    /// `(℘(z), ℘′(z))`.
    ///
    /// Arguments closer to a half-period `ω` than to a lattice point go
    /// through `℘(ω + t) = e + (e − e′)(e − e″)/(℘(t) − e)`, so the series is
    /// only ever summed near the origin.
    pub fn eval(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        let zr = self.reduce(z);
        let near = self
            .half
            .iter()
            .map(|&(w, e)| (self.reduce(zr - w), e))
            .min_by(|x, y| x.0.norm().total_cmp(&y.0.norm()));
        match near {
            Some((t, e)) if t.norm() < zr.norm() => {
                if t.norm() <= 1e-300 {
                    return Ok((e, Complex64::new(0.0, 0.0)));
                }
                let (pt, dpt) = self.eval_near_origin(t)?;
                // (e − e′)(e − e″) = q′(e)/4
                let k = self.inv.q_prime(e) * 0.25;
                let d = pt - e;
                Ok((e + k / d, -k * dpt / (d * d)))
            }
            _ => self.eval_near_origin(zr),
        }
    }

    fn eval_near_origin(&self, zr: Complex64) -> Result<(Complex64, Complex64)> {
        let radius = self.config.pole_radius * self.shortest;
        if zr.norm() < radius {
            return Err(SpecialError::Pole { radius });
        }
        let limit = self.config.series_fraction * self.shortest;
        let mut halvings = 0;
        let mut w = zr;
        while w.norm() > limit {
            w *= 0.5;
            halvings += 1;
        }
        let (mut p, mut dp) = self.series(w);
        let g2 = self.inv.g2;
        for _ in 0..halvings {
            // tangent-line doubling on y² = 4x³ − g2 x − g3
            let slope = (p * p * 12.0 - g2) / (dp * 2.0);
            let p2 = slope * slope * 0.25 - p * 2.0;
            let dp2 = slope * (p - p2) - dp;
            p = p2;
            dp = dp2;
        }
        Ok((p, dp))
    }

    fn series(&self, w: Complex64) -> (Complex64, Complex64) {
        let t = w * w;
        let mut s = Complex64::new(0.0, 0.0);
        let mut ds = Complex64::new(0.0, 0.0);
        // Horner in t: S(t) = Σ c_k t^{k−1}, S'(t)-like sum for ℘′
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            let k = (i + 2) as f64;
            s = s * t + c;
            ds = ds * t + c * (2.0 * k - 2.0);
        }
        let p = t.inv() + s * t;
        let dp = -(t * w).inv() * 2.0 + ds * w;
        (p, dp)
    }

    /// A point `z` with `℘(z) = w`. When `slope` is given, the sign of `z` is
    /// chosen so that `℘′(z)` is the closer of `±slope`.
    pub fn inverse(&self, w: Complex64, slope: Option<Complex64>) -> Result<Complex64> {
        let e = self.roots.roots;
        let mut z = carlson_rf(w - e[0], w - e[1], w - e[2]);
        if !z.is_finite() {
            return Err(SpecialError::NoConvergence("carlson_rf"));
        }
        for _ in 0..40 {
            let (p, dp) = self.eval(z)?;
            let f = p - w;
            if f.norm() <= 1e-15 * (1.0 + w.norm()) || dp.norm() == 0.0 {
                break;
            }
            let step = f / dp;
            z -= step;
            if step.norm() <= 1e-16 * (1.0 + z.norm()) {
                break;
            }
        }
        let (p, dp) = self.eval(z)?;
        if (p - w).norm() > 1e-8 * (1.0 + w.norm()) {
            return Err(SpecialError::NoConvergence("weierstrass inverse"));
        }
        if let Some(y) = slope {
            if (dp - y).norm() > (dp + y).norm() {
                z = -z;
            }
        }
        Ok(z)
    }
}

fn laurent_coefficients(g2: f64, g3: f64, terms: usize) -> Vec<f64> {
    // index i holds c_{i+2}
    let n = terms.max(2);
    let mut c = vec![0.0; n];
    c[0] = g2 / 20.0;
    c[1] = g3 / 28.0;
    for k in 4..n + 2 {
        let sum: f64 = (2..=k - 2).map(|m| c[m - 2] * c[k - m - 2]).sum();
        c[k - 2] = 3.0 / (((2 * k + 1) * (k - 3)) as f64) * sum;
    }
    c
}

/// One-shot `(℘(z), ℘′(z))`; builds the lattice on every call, so prefer
/// [`WeierstrassP`] for repeated evaluation.
pub fn weierstrass_p(z: Complex64, inv: WeierstrassInvariants) -> Result<(Complex64, Complex64)> {
    WeierstrassP::new(inv)?.eval(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn residual(inv: &WeierstrassInvariants, p: Complex64, dp: Complex64) -> f64 {
        (dp * dp - inv.q(p)).norm() / (1.0 + p.norm().powi(3))
    }

    fn random_point(rng: &mut ChaCha8Rng, l: &PeriodLattice) -> Complex64 {
        let (a, b) = l.generators();
        a * rng.gen_range(-0.5..0.5) + b * rng.gen_range(-0.5..0.5)
    }

    /// Eisenstein q-series for g2, g3 of the lattice: an oracle independent
    /// of the Laurent/duplication evaluation.
    fn eisenstein_invariants(l: &PeriodLattice) -> (Complex64, Complex64) {
        let (a, b) = l.reduced_basis();
        let (a, b) = if (b / a).im > 0.0 { (a, b) } else { (a, -b) };
        let tau = b / a;
        let q = (Complex64::new(0.0, 2.0 * std::f64::consts::PI) * tau).exp();
        let sigma = |n: u64, p: i32| (1..=n).filter(|d| n % d == 0).map(|d| (d as f64).powi(p)).sum::<f64>();
        let mut e4 = Complex64::new(1.0, 0.0);
        let mut e6 = Complex64::new(1.0, 0.0);
        let mut qn = Complex64::new(1.0, 0.0);
        for n in 1..60u64 {
            qn *= q;
            e4 += qn * 240.0 * sigma(n, 3);
            e6 -= qn * 504.0 * sigma(n, 5);
        }
        let pi = std::f64::consts::PI;
        let g2 = e4 * (4.0 * pi.powi(4) / 3.0) / a.powi(4);
        let g3 = e6 * (8.0 * pi.powi(6) / 27.0) / a.powi(6);
        (g2, g3)
    }

    #[test]
    fn differential_equation_and_parity() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &(g2, g3) in &[(4.0 / 3.0, 8.0 / 27.0 - 0.02), (4.0 / 3.0, -1.7), (-2.0, 0.5), (3.0, 0.1)] {
            let inv = WeierstrassInvariants::new(g2, g3);
            let wp = WeierstrassP::new(inv).unwrap();
            for _ in 0..200 {
                let z = random_point(&mut rng, &wp.lattice());
                let Ok((p, dp)) = wp.eval(z) else { continue };
                assert!(residual(&inv, p, dp) <= 1e-9, "{g2} {g3} {z}");
                let (pm, dpm) = wp.eval(-z).unwrap();
                assert!((pm - p).norm() <= 1e-10 * (1.0 + p.norm()));
                assert!((dpm + dp).norm() <= 1e-10 * (1.0 + dp.norm()));
            }
        }
    }

    #[test]
    fn leading_laurent_term() {
        let wp = WeierstrassP::new(WeierstrassInvariants::new(4.0 / 3.0, -1.0)).unwrap();
        for &r in &[1e-2, 1e-4, 1e-6] {
            let z = Complex64::from_polar(r, 0.7);
            let (p, _) = wp.eval(z).unwrap();
            assert!((z * z * p - 1.0).norm() < 10.0 * r * r);
        }
    }

    #[test]
    fn pole_rejected() {
        let wp = WeierstrassP::new(WeierstrassInvariants::new(4.0 / 3.0, -1.0)).unwrap();
        let (a, _) = wp.lattice().generators();
        assert!(matches!(wp.eval(a * 3.0), Err(SpecialError::Pole { .. })));
    }

    #[test]
    fn half_period_values_are_roots() {
        for &g3 in &[8.0 / 27.0 - 0.02, 8.0 / 27.0 - 2.0, 0.9] {
            let inv = WeierstrassInvariants::new(4.0 / 3.0, g3);
            let wp = WeierstrassP::new(inv).unwrap();
            let l = wp.lattice();
            let roots = wp.roots().roots;
            for h in [l.omega1, l.omega3, l.omega1 + l.omega3] {
                let (p, dp) = wp.eval(h).unwrap();
                assert!(dp.norm() < 1e-7, "{h} {dp}");
                assert!(roots.iter().any(|e| (e - p).norm() < 1e-9), "{p}");
            }
            // ℘(ω1) is the largest real root when all three are real
            if wp.roots().real_count == 3 {
                assert!((wp.eval(l.omega1).unwrap().0.re - roots[2].re).abs() < 1e-9);
            } else {
                assert!((wp.eval(l.omega1).unwrap().0.re - roots[0].re).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn periodicity() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for &g3 in &[8.0 / 27.0 - 0.02, -3.0] {
            let wp = WeierstrassP::new(WeierstrassInvariants::new(4.0 / 3.0, g3)).unwrap();
            let (a, b) = wp.lattice().generators();
            for _ in 0..50 {
                let z = random_point(&mut rng, &wp.lattice());
                let (p, _) = wp.eval(z).unwrap();
                for shift in [a, b, a + b, a * 2.0 - b] {
                    let (ps, _) = wp.eval(z + shift).unwrap();
                    assert!((ps - p).norm() <= 1e-9 * (1.0 + p.norm()));
                }
            }
        }
    }

    #[test]
    fn lattice_reproduces_invariants() {
        for &(g2, g3) in &[(4.0 / 3.0, 8.0 / 27.0 - 0.02), (4.0 / 3.0, -2.0), (5.0, 1.0), (-1.0, 2.0)] {
            let l = half_periods(&WeierstrassInvariants::new(g2, g3)).unwrap();
            let (eg2, eg3) = eisenstein_invariants(&l);
            assert!((eg2 - g2).norm() < 1e-8 * (1.0 + g2.abs()), "{g2} {eg2}");
            assert!((eg3 - g3).norm() < 1e-8 * (1.0 + g3.abs()), "{g3} {eg3}");
        }
    }

    #[test]
    fn inverse_round_trip() {
        let wp = WeierstrassP::new(WeierstrassInvariants::new(4.0 / 3.0, 8.0 / 27.0 - 0.02)).unwrap();
        for w in [Complex64::new(2.0 / 3.0, 0.0), Complex64::new(-1.0 / 3.0, 0.0), Complex64::new(0.2, 0.5)] {
            let z = wp.inverse(w, None).unwrap();
            let (p, dp) = wp.eval(z).unwrap();
            assert!((p - w).norm() < 1e-12);
            let z2 = wp.inverse(w, Some(-dp)).unwrap();
            assert!((wp.eval(z2).unwrap().1 + dp).norm() < 1e-10);
        }
    }
}
