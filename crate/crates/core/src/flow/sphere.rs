use serde::{Deserialize, Serialize};

/// Great circle on the unit sphere traced at constant rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphereGeodesic {
    /// Unit normal of the plane of the circle.
    pub n: [f64; 3],
    /// Orthonormal frame of the plane, `a × b = n`.
    pub a: [f64; 3],
    pub b: [f64; 3],
    pub theta0: f64,
    /// `dθ/ds = √(2H₂)`.
    pub rate: f64,
}

fn cross(u: [f64; 3], v: [f64; 3]) -> [f64; 3] {
    [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]]
}

fn normalize(v: [f64; 3]) -> Option<[f64; 3]> {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    (n > 0.0 && n.is_finite()).then(|| v.map(|c| c / n))
}

impl SphereGeodesic {
    /// The equator `z = 0` traced with sphere energy `h2`.
    pub fn equatorial(h2: f64) -> Self {
        Self { n: [0.0, 0.0, 1.0], a: [1.0, 0.0, 0.0], b: [0.0, 1.0, 0.0], theta0: 0.0, rate: (2.0 * h2).sqrt() }
    }

    /// Circle in the plane orthogonal to `n`; `None` for a zero normal.
    pub fn with_normal(n: [f64; 3], theta0: f64, h2: f64) -> Option<Self> {
        let n = normalize(n)?;
        let seed = if n[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
        let a = normalize(cross(seed, n))?;
        let b = cross(n, a);
        Some(Self { n, a, b, theta0, rate: (2.0 * h2).sqrt() })
    }

    /// Unwrapped angle at parameter `s`.
    pub fn theta(&self, s: f64) -> f64 {
        self.theta0 + self.rate * s
    }
}

pub fn sphere_point(geo: &SphereGeodesic, s: f64) -> [f64; 3] {
    let (sn, cs) = geo.theta(s).sin_cos();
    std::array::from_fn(|i| cs * geo.a[i] + sn * geo.b[i])
}
