//! Laplace-type integrals along the segment [0, 2K(m)], the solution
//! sequence of the associated Jacobi-matrix difference equation, and
//! saddle-point asymptotics checks.

use nalgebra::DMatrix;
use num_complex::Complex64;
use std::f64::consts::PI;

use crate::elliptic::build_context;
use crate::error::{Error, Result};
use crate::jacobi::triple_at_x;
use crate::param::{Parameter, Regime};

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Panel-doubling cap for the adaptive composite rule.
pub const MAX_PANELS: usize = 1 << 10;
/// Relative tolerance for successive panel doublings (with a unit absolute
/// floor so that integrals that are exactly zero terminate).
pub const SEGMENT_TOL: f64 = 1e-12;

/// Gauss-Legendre nodes and weights on [0, 1], `order` points per panel,
/// used as a composite rule over `panels` equal panels. Mapped onto the
/// segment 0 -> 2K(m) via t = 2K(m) s.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub order: usize,
    pub panels: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    /// Newton iteration on the Legendre recurrence; accurate to ~1e-15 for
    /// order <= 64.
    pub fn gauss_legendre(order: usize, panels: usize) -> Result<Self> {
        if order == 0 || order > 64 || panels == 0 {
            return Err(Error::Domain(format!(
                "gauss_legendre: order {order} or panels {panels} out of range"
            )));
        }
        let n = order;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n {
            // Chebyshev-like initial guess on [-1, 1]
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                // Legendre P_n(x) and derivative by recurrence
                let mut p0 = 1.0;
                let mut p1 = x;
                for k in 2..=n {
                    let kf = k as f64;
                    let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                    p0 = p1;
                    p1 = p2;
                }
                let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            // recompute derivative at the converged node for the weight
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            nodes[i] = 0.5 * (x + 1.0);
            weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
        }
        // mirror-sort ascending for determinism
        let mut idx: Vec<usize> = (0..n).collect();
        idx.sort_by(|&a, &b| nodes[a].total_cmp(&nodes[b]));
        let nodes = idx.iter().map(|&i| nodes[i]).collect();
        let weights = idx.iter().map(|&i| weights[i]).collect();
        Ok(QuadratureRule { order, panels, nodes, weights })
    }

    /// Sum of the mapped weights over one unit interval; equals 1, so the
    /// segment image integrates constants to 2K(m) exactly.
    pub fn weight_sum(&self) -> f64 {
        self.weights.iter().sum()
    }
}

fn composite_panels(
    f: &dyn Fn(Complex64) -> Result<Complex64>,
    two_k: Complex64,
    rule: &QuadratureRule,
    panels: usize,
) -> Result<Complex64> {
    let h = 1.0 / panels as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for p in 0..panels {
        let s0 = p as f64 * h;
        for (x, w) in rule.nodes.iter().zip(rule.weights.iter()) {
            let s = s0 + h * x;
            acc += *w * h * f(two_k * s)?;
        }
    }
    Ok(two_k * acc)
}

/// Composite Gauss-Legendre over the segment 0 -> 2K(m) with a fixed panel
/// count (no doubling); exposed for convergence studies.
pub fn integrate_segment_fixed(
    f: &dyn Fn(Complex64) -> Result<Complex64>,
    m: &Parameter,
    rule: &QuadratureRule,
) -> Result<Complex64> {
    let two_k = segment_length(m)?;
    composite_panels(f, two_k, rule, rule.panels)
}

/// Adaptive composite Gauss-Legendre over the segment 0 -> 2K(m): panels
/// are doubled until successive values agree to SEGMENT_TOL (relative,
/// unit absolute floor), starting from `rule.panels`.
pub fn integrate_segment(
    f: &dyn Fn(Complex64) -> Result<Complex64>,
    m: &Parameter,
    rule: &QuadratureRule,
) -> Result<Complex64> {
    let two_k = segment_length(m)?;
    let mut panels = rule.panels;
    let mut prev = composite_panels(f, two_k, rule, panels)?;
    while panels <= MAX_PANELS / 2 {
        panels *= 2;
        let next = composite_panels(f, two_k, rule, panels)?;
        if (next - prev).norm() <= SEGMENT_TOL * next.norm().max(1.0) {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::NoConvergence("integrate_segment", MAX_PANELS))
}

fn segment_length(m: &Parameter) -> Result<Complex64> {
    match m.regime() {
        Regime::One => Err(Error::Domain(
            "segment endpoint 2K(m) is infinite at m = 1".into(),
        )),
        Regime::Cut => Ok(2.0 * build_context(*m)?.k),
        _ => Ok(2.0 * build_context(*m)?.k),
    }
}

/// Which weight the Laplace-type integral carries: cn or dn.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CdKind {
    C,
    D,
}

/// C_l(z;m) = int_0^{2K} e^{-zt} cn(t|m) sn^l(t|m) dt and the dn analogue
/// D_l; the integrand is evaluated pointwise through the theta quotients
/// at x = pi t / (2K).
pub fn cd_integral(kind: CdKind, l: u32, z: Complex64, m: &Parameter) -> Result<Complex64> {
    let rule = QuadratureRule::gauss_legendre(16, 4)?;
    cd_integral_with_rule(kind, l, z, m, &rule)
}

/// `cd_integral` with an explicit base rule (order and starting panels).
pub fn cd_integral_with_rule(
    kind: CdKind,
    l: u32,
    z: Complex64,
    m: &Parameter,
    rule: &QuadratureRule,
) -> Result<Complex64> {
    check_closure_disk(m)?;
    let ctx = build_context(*m)?;
    let two_k = 2.0 * ctx.k;
    let f = |t: Complex64| -> Result<Complex64> {
        let x = PI * t / two_k;
        let (s, c, d) = triple_at_x(x, &ctx)?;
        let g = match kind {
            CdKind::C => c,
            CdKind::D => d,
        };
        Ok((-z * t).exp() * g * s.powi(l as i32))
    };
    integrate_segment(&f, m, rule)
}

fn check_closure_disk(m: &Parameter) -> Result<()> {
    let mm = m.m();
    if mm.norm() > 1.0 + 1e-12 {
        return Err(Error::Domain(format!(
            "parameter m = {mm} outside the closed unit disk"
        )));
    }
    if m.regime() == Regime::One {
        return Err(Error::Domain("m = 1 excluded".into()));
    }
    Ok(())
}

/// The explicit solution sequence of the difference equation
/// (J(k) - z) v = -2 cos(K z) e1:
///   v_{2l+1} = i (-1)^l k^l e^{iKz} C_{2l}(iz; m),
///   v_{2l+2} = (-1)^{l+1} k^l e^{iKz} D_{2l+1}(iz; m),
/// with m = k^2 carried as k^l (the matrix weight scale) so the identity
/// holds for every k in the closed disk, not only k > 0.
#[derive(Debug, Clone)]
pub struct VSequence {
    pub z: Complex64,
    pub k: Complex64,
    pub m: Complex64,
    pub entries: Vec<Complex64>,
}

pub fn v_sequence(z: Complex64, k: Complex64, n_max: usize) -> Result<VSequence> {
    let rule = QuadratureRule::gauss_legendre(16, 4)?;
    v_sequence_with_rule(z, k, n_max, &rule)
}

/// `v_sequence` with an explicit base quadrature rule.
pub fn v_sequence_with_rule(
    z: Complex64,
    k: Complex64,
    n_max: usize,
    rule: &QuadratureRule,
) -> Result<VSequence> {
    if k.norm() > 1.0 + 1e-12 || k == ONE || k == -ONE {
        return Err(Error::Domain(format!(
            "k = {k} outside closure(D) \\ {{+/-1}}"
        )));
    }
    if n_max == 0 {
        return Err(Error::Domain("n_max must be >= 1".into()));
    }
    let m = k * k;
    let p = Parameter::new(m);
    let ctx = build_context(p)?;
    let pref = (I * ctx.k * z).exp();
    let mut entries = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let l = (n - 1) / 2;
        let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
        let kl = k.powi(l as i32);
        let entry = if n % 2 == 1 {
            I * sign * kl * pref * cd_integral_with_rule(CdKind::C, 2 * l as u32, I * z, &p, rule)?
        } else {
            -sign * kl * pref
                * cd_integral_with_rule(CdKind::D, (2 * l + 1) as u32, I * z, &p, rule)?
        };
        entries.push(entry);
    }
    Ok(VSequence { z, k, m, entries })
}

/// Off-diagonal weights of J(k): 1, 2k, 3, 4k, ...
fn weight(n: usize, k: Complex64) -> Complex64 {
    if n % 2 == 0 {
        k * n as f64
    } else {
        Complex64::new(n as f64, 0.0)
    }
}

/// Apply (J(k) - z) to the truncated v and return the row values.
///
/// The first returned row must equal rhs_check = -2 cos(K(m) z); rows
/// 2..n_max-1 must vanish. The last row references the truncated
/// v_{n_max+1} and is excluded.
pub fn jacobi_residual(
    k: Complex64,
    z: Complex64,
    n_max: usize,
) -> Result<(Vec<Complex64>, Complex64)> {
    let rule = QuadratureRule::gauss_legendre(16, 4)?;
    jacobi_residual_with_rule(k, z, n_max, &rule)
}

/// `jacobi_residual` with an explicit base quadrature rule.
pub fn jacobi_residual_with_rule(
    k: Complex64,
    z: Complex64,
    n_max: usize,
    rule: &QuadratureRule,
) -> Result<(Vec<Complex64>, Complex64)> {
    if n_max < 3 {
        return Err(Error::Domain("n_max must be >= 3".into()));
    }
    let vs = v_sequence_with_rule(z, k, n_max, rule)?;
    let v = &vs.entries;
    let ctx = build_context(Parameter::new(vs.m))?;
    let rhs_check = -2.0 * (ctx.k * z).cos();
    let mut rows = Vec::with_capacity(n_max - 1);
    rows.push(v[1] - z * v[0]);
    for n in 2..n_max {
        rows.push(weight(n - 1, k) * v[n - 2] + weight(n, k) * v[n] - z * v[n - 1]);
    }
    Ok((rows, rhs_check))
}

/// Eigenvalues of the n x n truncation of J(k) for real k, via the dense
/// nonsymmetric Schur route. Truncation corrupts edge eigenvalues; compare
/// only lattice points well inside the spectral window.
pub fn truncated_eigenvalues(k: f64, n: usize) -> Result<Vec<Complex64>> {
    if n < 2 {
        return Err(Error::Domain("matrix dimension must be >= 2".into()));
    }
    let mut mat = DMatrix::<f64>::zeros(n, n);
    for i in 0..n - 1 {
        let w = if (i + 1) % 2 == 0 { (i + 1) as f64 * k } else { (i + 1) as f64 };
        mat[(i, i + 1)] = w;
        mat[(i + 1, i)] = w;
    }
    let mut eig: Vec<Complex64> = mat
        .complex_eigenvalues()
        .iter()
        .map(|e| Complex64::new(e.re, e.im))
        .collect();
    eig.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(eig)
}

/// Test functions with a known saddle-point leading term for
/// I_l(f) = int_0^{2K} f(t) sn^l(t|m) dt.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SaddleFn {
    /// f = 1: r = 0, f(K) = 1.
    ConstOne,
    /// f = (t - K)^2: r = 1, f''(K) = 2.
    SquareAboutK,
}

/// For each l, the ratio of the quadrature value of I_l(f) to the
/// predicted leading term sqrt(2 pi)/(2^r r!) f^{(2r)}(K) (1-m)^{-r-1/2}
/// l^{-r-1/2}. Ratios must approach 1 as l grows.
pub fn saddle_check(
    f_id: SaddleFn,
    m: &Parameter,
    l_list: &[u32],
) -> Result<Vec<(u32, Complex64)>> {
    check_closure_disk(m)?;
    let ctx = build_context(*m)?;
    let two_k = 2.0 * ctx.k;
    let big_k = ctx.k;
    let one_minus_m = ONE - m.m();
    let rule = QuadratureRule::gauss_legendre(16, 4)?;
    let mut out = Vec::with_capacity(l_list.len());
    for &l in l_list {
        let f = |t: Complex64| -> Result<Complex64> {
            let x = PI * t / two_k;
            let (s, _, _) = triple_at_x(x, &ctx)?;
            let fv = match f_id {
                SaddleFn::ConstOne => ONE,
                SaddleFn::SquareAboutK => (t - big_k) * (t - big_k),
            };
            Ok(fv * s.powi(l as i32))
        };
        let val = integrate_segment(&f, m, &rule)?;
        let lf = l as f64;
        let pred = match f_id {
            SaddleFn::ConstOne => {
                (2.0 * PI).sqrt() * one_minus_m.powf(-0.5) * lf.powf(-0.5)
            }
            SaddleFn::SquareAboutK => {
                // sqrt(2 pi)/(2 * 1!) * f''(K) = sqrt(2 pi), times (1-m)^{-3/2} l^{-3/2}
                (2.0 * PI).sqrt() * one_minus_m.powf(-1.5) * lf.powf(-1.5)
            }
        };
        out.push((l, val / pred));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    const K_QUARTER: f64 = 1.6857503548125961; // K(0.25), mpmath

    #[test]
    fn rule_weights_sum_to_one() {
        for order in [4, 8, 16, 32] {
            let r = QuadratureRule::gauss_legendre(order, 1).unwrap();
            assert!((r.weight_sum() - 1.0).abs() < 1e-14, "order {order}");
        }
    }

    #[test]
    fn rule_integrates_polynomials_exactly() {
        // order n is exact through degree 2n-1
        let r = QuadratureRule::gauss_legendre(8, 1).unwrap();
        let val: f64 = r
            .nodes
            .iter()
            .zip(&r.weights)
            .map(|(x, w)| w * x.powi(14))
            .sum();
        assert!((val - 1.0 / 15.0).abs() < 1e-15);
    }

    #[test]
    fn constant_integrand_gives_segment_length() {
        let m = Parameter::from_re(0.5);
        let rule = QuadratureRule::gauss_legendre(16, 2).unwrap();
        let v = integrate_segment(&|_| Ok(ONE), &m, &rule).unwrap();
        let two_k = 2.0 * build_context(m).unwrap().k;
        assert!((v - two_k).norm() < 1e-12 * two_k.norm());
    }

    #[test]
    fn cn_integral_vanishes_by_symmetry() {
        // cn(2K - t) = -cn(t) annihilates the l = 0, z = 0 integral
        let v = cd_integral(CdKind::C, 0, c(0.0, 0.0), &Parameter::from_re(0.5)).unwrap();
        assert!(v.norm() < 1e-12, "C_0(0) = {v}");
    }

    #[test]
    fn dn_integral_is_pi() {
        // antiderivative of dn is the amplitude; am(2K) = pi
        let v = cd_integral(CdKind::D, 0, c(0.0, 0.0), &Parameter::from_re(0.5)).unwrap();
        assert!((v.re - PI).abs() < 1e-10 && v.im.abs() < 1e-12, "D_0(0) = {v}");
    }

    // Reference values computed with mpmath 1.3 (tanh-sinh quadrature).
    #[test]
    fn cd_reference_values() {
        let m = Parameter::from_re(0.5);
        let c0 = cd_integral(CdKind::C, 0, ONE, &m).unwrap();
        assert!((c0.re - 0.575605729843657786).abs() < 1e-11, "C_0(1;0.5) = {c0}");
        let d1 = cd_integral(CdKind::D, 1, ONE, &m).unwrap();
        assert!((d1.re - 0.448917134586035816).abs() < 1e-11, "D_1(1;0.5) = {d1}");
    }

    #[test]
    fn v_entries_reference() {
        // frozen from the 30-digit route at k = 0.5, z = 0.7 + 0.2i
        let vs = v_sequence(c(0.7, 0.2), c(0.5, 0.0), 4).unwrap();
        let want = [
            c(-1.42930041903230441, -0.289302182735914589),
            c(-1.74816164162453314, 0.146975779662313213),
            c(0.176192113962668643, 0.0425529001746271845),
            c(0.620995180454491914, -0.0273167755825134849),
        ];
        for (got, want) in vs.entries.iter().zip(want.iter()) {
            assert!((got - want).norm() < 1e-9, "{got} vs {want}");
        }
    }

    #[test]
    fn v1_vanishes_at_z_zero() {
        // v_1 = i C_0(0; m) = 0 by cn antisymmetry
        let vs = v_sequence(c(0.0, 0.0), c(0.5, 0.0), 2).unwrap();
        assert!(vs.entries[0].norm() < 1e-12);
    }

    #[test]
    fn residual_rows_vanish() {
        let (rows, rhs) = jacobi_residual(c(0.5, 0.0), c(0.7, 0.2), 12).unwrap();
        assert!((rows[0] - rhs).norm() < 1e-8, "row 1: {} vs {rhs}", rows[0]);
        for (i, r) in rows.iter().enumerate().skip(1) {
            assert!(r.norm() < 1e-8, "row {}: {r}", i + 1);
        }
    }

    #[test]
    fn residual_at_z_zero_first_row_is_minus_two() {
        let (rows, rhs) = jacobi_residual(c(0.5, 0.0), c(0.0, 0.0), 6).unwrap();
        assert!((rhs - c(-2.0, 0.0)).norm() < 1e-14);
        assert!((rows[0] - rhs).norm() < 1e-10);
    }

    #[test]
    fn eigenvector_at_lattice_point() {
        // z = pi/(2K(m)) makes the rhs vanish: v is a truncated eigenvector
        let z = c(PI / (2.0 * K_QUARTER), 0.0);
        let (rows, rhs) = jacobi_residual(c(0.5, 0.0), z, 10).unwrap();
        assert!(rhs.norm() < 1e-13);
        assert!(rows[0].norm() < 1e-8, "first row = {}", rows[0]);
    }

    #[test]
    fn truncated_spectrum_hits_lattice() {
        let eig = truncated_eigenvalues(0.5, 80).unwrap();
        for j in [1.0_f64, 3.0] {
            let target = j * PI / (2.0 * K_QUARTER);
            let best = eig
                .iter()
                .map(|e| (e - c(target, 0.0)).norm())
                .fold(f64::INFINITY, f64::min);
            assert!(best < 1e-3, "lattice point {target}: nearest at distance {best}");
        }
    }

    #[test]
    fn saddle_ratios_approach_one() {
        let m = Parameter::from_re(0.5);
        let ls = [16, 32, 64, 128];
        let r0 = saddle_check(SaddleFn::ConstOne, &m, &ls).unwrap();
        let errs: Vec<f64> = r0.iter().map(|(_, r)| (r - ONE).norm()).collect();
        assert!(errs.windows(2).all(|w| w[1] < w[0]), "not improving: {errs:?}");
        assert!(errs[3] < 0.15, "final const_one error {}", errs[3]);
        let r1 = saddle_check(SaddleFn::SquareAboutK, &m, &ls).unwrap();
        let errs1: Vec<f64> = r1.iter().map(|(_, r)| (r - ONE).norm()).collect();
        assert!(errs1.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn saddle_prediction_scales_across_parameters() {
        // const_one predictions scale by (1-m)^{-1/2}: the ratio of ratios
        // tends to 1
        let l = [128];
        let a = saddle_check(SaddleFn::ConstOne, &Parameter::from_re(0.25), &l).unwrap();
        let b = saddle_check(SaddleFn::ConstOne, &Parameter::from_re(0.5), &l).unwrap();
        let rr = a[0].1 / b[0].1;
        assert!((rr - ONE).norm() < 0.05, "ratio of ratios {rr}");
    }

    #[test]
    fn domain_guards() {
        assert!(cd_integral(CdKind::C, 0, ONE, &Parameter::from_re(1.5)).is_err());
        assert!(v_sequence(ONE, c(1.0, 0.0), 4).is_err());
        assert!(jacobi_residual(c(0.5, 0.0), ONE, 2).is_err());
    }
}
