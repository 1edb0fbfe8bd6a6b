use num_complex::Complex64;

/// `pq − (x² − 1)e^{x²−1}`; zero exactly on the complex surface.
pub fn surface_residual(p: Complex64, q: Complex64, x: Complex64) -> Complex64 {
    let d = x * x - 1.0;
    p * q - d * d.exp()
}

/// The differential constraint `p dq + q dp − 2x³e^{x²−1} dx` evaluated on
/// a tangent vector `(dp, dq, dx)` at `(p, q, x)`.
pub fn surface_constraint(point: [Complex64; 3], tangent: [Complex64; 3]) -> Complex64 {
    let [p, q, x] = point;
    let [dp, dq, dx] = tangent;
    p * dq + q * dp - x * x * x * (x * x - 1.0).exp() * dx * 2.0
}

/// Both residuals at once.
pub fn surface_residuals(point: [Complex64; 3], tangent: [Complex64; 3]) -> (Complex64, Complex64) {
    (surface_residual(point[0], point[1], point[2]), surface_constraint(point, tangent))
}
