//! Independent numerical oracles for the integration tests. Nothing here
//! may call into the AGM or theta-series paths it is used to verify.

use num_complex::Complex64;

/// Adaptive Simpson on [a, b].
fn simpson(
    f: &dyn Fn(f64) -> Complex64,
    a: f64,
    fa: Complex64,
    b: f64,
    fb: Complex64,
    fm: Complex64,
    whole: Complex64,
    tol: f64,
    depth: u32,
) -> Complex64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.norm() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson(f, a, fa, m, fm, flm, left, tol / 2.0, depth - 1)
        + simpson(f, m, fm, b, fb, frm, right, tol / 2.0, depth - 1)
}

pub fn integrate(f: &dyn Fn(f64) -> Complex64, a: f64, b: f64, tol: f64) -> Complex64 {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson(f, a, fa, b, fb, fm, whole, tol, 40)
}

/// K(m) by quadrature of the defining integral, substituted t = sin(phi)
/// to remove the endpoint singularity:
/// K(m) = int_0^{pi/2} dphi / sqrt(1 - m sin^2 phi).
pub fn k_quadrature(m: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    let f = |phi: f64| one / (one - m * phi.sin().powi(2)).sqrt();
    integrate(&f, 0.0, std::f64::consts::FRAC_PI_2, 1e-13)
}
