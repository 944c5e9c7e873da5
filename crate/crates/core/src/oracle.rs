//! Independent identity oracles.
//!
//! Each oracle returns both sides of a named identity evaluated by two
//! different routes: the left side through the main theta pipeline, the
//! right side through the identity's explicit formula built from
//! real-parameter evaluations (or an independent recursion). They exist to
//! cross-check the pipeline, so nothing here may share the code path it
//! verifies beyond the basic triple evaluation at real parameters.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::elliptic::build_context;
use crate::error::{Error, Result};
use crate::jacobi::{cut_sn, jacobi_triple, triple_at_x};
use crate::param::Parameter;

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Term count for the exponential-series right-hand sides; with the
/// |q| < 0.9 guard the tail is below 1e-12 on the sampled domains.
pub const FOURIER_TERMS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleId {
    /// sn^2 on the unit circle against the double-argument/Landen form.
    UnitCircleSn2,
    /// |sn|^4 on the circle |m-1| = 1 against the real-parameter form.
    D1BoundarySn4,
    /// Pipeline sn against the descending-Landen recursion.
    LandenRecursion,
    /// sc(tau K u|m) against its exponential series.
    FourierRatioSc,
    /// nc(tau K u|m) against its exponential series.
    FourierRatioNc,
    /// dc(tau K u|m) against its exponential series.
    FourierRatioDc,
    /// One-sided sn on the cut: complex-argument continuation against the
    /// addition-formula decomposition.
    CutContinuation,
}

/// Evaluate both sides of the identity `id`.
///
/// `p` is the angle theta for the circle identities (real part used), the
/// parameter m for the Landen and Fourier identities, and the real cut
/// point m > 1 for the continuation identity.
pub fn oracle_eval(id: OracleId, u: f64, p: Complex64) -> Result<(Complex64, Complex64)> {
    match id {
        OracleId::UnitCircleSn2 => unit_circle_sn2(u, p.re),
        OracleId::D1BoundarySn4 => d1_boundary_sn4(u, p.re),
        OracleId::LandenRecursion => landen_recursion(u, p),
        OracleId::FourierRatioSc => fourier_ratio(u, p, Fourier::Sc),
        OracleId::FourierRatioNc => fourier_ratio(u, p, Fourier::Nc),
        OracleId::FourierRatioDc => fourier_ratio(u, p, Fourier::Dc),
        OracleId::CutContinuation => cut_continuation(u, p.re),
    }
}

fn real_triple(u: f64, m: f64) -> Result<(Complex64, Complex64, Complex64)> {
    let t = jacobi_triple(u, &build_context(Parameter::from_re(m))?)?;
    Ok((t.s, t.c, t.d))
}

/// Eq. route: sn^2(K(e^{4i th})u | e^{4i th})
///   = e^{-2i th} (1 - C)/(1 + C),
/// C = cn([K(cos^2 th) + i K(sin^2 th)]u | cos^2 th) expanded over the
/// real-parameter triples at cos^2 th and sin^2 th.
fn unit_circle_sn2(u: f64, th: f64) -> Result<(Complex64, Complex64)> {
    if !(0.0 < th && th <= PI / 4.0) {
        return Err(Error::Domain(format!("theta = {th} outside (0, pi/4]")));
    }
    let m = (4.0 * I * th).exp();
    let t = jacobi_triple(u, &build_context(Parameter::new(m))?)?;
    let lhs = t.s * t.s;

    let mc = th.cos().powi(2);
    let ms = th.sin().powi(2);
    let (s, c, d) = real_triple(u, mc)?;
    let (s1, c1, d1) = real_triple(u, ms)?;
    let cnv = (c * c1 - I * s * s1 * d * d1) / (c1 * c1 + mc * s * s * s1 * s1);
    let rhs = (-2.0 * I * th).exp() * (ONE - cnv) / (ONE + cnv);
    Ok((lhs, rhs))
}

/// |sn(K(1-e^{4i th'})u | 1-e^{4i th'})|^4 for th' = -th in [-pi/4, 0)
/// against sn^2/(4 dn^2) (1-cn)/(1+cn) at parameter sin^2 th, argument
/// 2K(sin^2 th)u.
fn d1_boundary_sn4(u: f64, th: f64) -> Result<(Complex64, Complex64)> {
    if !(0.0 < th && th <= PI / 4.0) {
        return Err(Error::Domain(format!("theta = {th} outside (0, pi/4]")));
    }
    let m = ONE - (-4.0 * I * th).exp();
    let sig = crate::jacobi::sigma(u, &Parameter::new(m))?.sigma;
    let lhs = Complex64::new(sig.powi(4), 0.0);

    let sg = th.sin().powi(2);
    let (s2, c2, d2) = real_triple(2.0 * u, sg)?;
    let rhs = (s2 * s2 / (4.0 * d2 * d2)) * (ONE - c2) / (ONE + c2);
    Ok((lhs, rhs))
}

/// sn(K(m)u|m) for real m in (0,1) via repeated descending Landen steps
/// k -> (1 - k')/(1 + k') down to a trigonometric seed. The argument scale
/// u is invariant under the step since K(k) = (1 + k1) K(k1).
pub fn landen_sn(u: f64, m: f64) -> f64 {
    let mut stack = Vec::new();
    let mut mm = m;
    while mm > 1e-28 {
        let kp = (1.0 - mm).sqrt();
        let k1 = (1.0 - kp) / (1.0 + kp);
        stack.push(k1);
        mm = k1 * k1;
    }
    let mut s = (PI * u / 2.0).sin();
    for &k1 in stack.iter().rev() {
        s = (1.0 + k1) * s / (1.0 + k1 * s * s);
    }
    s
}

fn landen_recursion(u: f64, p: Complex64) -> Result<(Complex64, Complex64)> {
    if p.im != 0.0 || !(0.0 < p.re && p.re < 1.0) {
        return Err(Error::Domain(format!("m = {p} not real in (0, 1)")));
    }
    let t = jacobi_triple(u, &build_context(Parameter::from_re(p.re))?)?;
    Ok((t.s, Complex64::new(landen_sn(u, p.re), 0.0)))
}

enum Fourier {
    Sc,
    Nc,
    Dc,
}

/// The exponential forms of the sc/nc/dc Fourier series at argument
/// tau K u. The pipeline side uses the imaginary transformation:
/// sc(tau K u|m) = i sn(K(m1)u|m1), nc = cn(K(m1)u|m1), dc = dn(K(m1)u|m1).
fn fourier_ratio(u: f64, m: Complex64, which: Fourier) -> Result<(Complex64, Complex64)> {
    if !(-2.0 < u && u < 2.0) {
        return Err(Error::Domain(format!("u = {u} outside (-2, 2)")));
    }
    let ctx = build_context(Parameter::new(m))?;
    let q = ctx.q;
    if q.norm() >= 0.9 {
        return Err(Error::NomeTooLarge(q.norm()));
    }
    let k = ctx.k;
    let m1 = ONE - m;
    // u may be negative here, so take the general-argument route
    let ctx1 = build_context(Parameter::new(m1))?;
    let x = Complex64::new(u * PI / 2.0, 0.0);
    let (s, c, d) = triple_at_x(x, &ctx1)?;

    let qp = |e: f64| q.powf(e);
    let rhs = match which {
        Fourier::Sc => {
            let mut sum = Complex64::new(0.0, 0.0);
            for n in 1..=FOURIER_TERMS {
                let nf = n as f64;
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                sum += sign * qp((2.0 - u) * nf) * (ONE - qp(2.0 * nf * u))
                    / (ONE + qp(2.0 * nf));
            }
            I * PI / (2.0 * m1.sqrt() * k) * (ONE - qp(u)) / (ONE + qp(u))
                + I * PI / (m1.sqrt() * k) * sum
        }
        Fourier::Nc => {
            let mut sum = Complex64::new(0.0, 0.0);
            for n in 0..=FOURIER_TERMS {
                let nf = n as f64;
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                sum += sign * qp((nf + 0.5) * (2.0 - u)) * (ONE + qp((2.0 * nf + 1.0) * u))
                    / (ONE + qp(2.0 * nf + 1.0));
            }
            PI / (m1.sqrt() * k) * (qp(u / 2.0) / (ONE + qp(u)) - sum)
        }
        Fourier::Dc => {
            let mut sum = Complex64::new(0.0, 0.0);
            for n in 0..=FOURIER_TERMS {
                let nf = n as f64;
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                sum += sign * qp((nf + 0.5) * (2.0 - u)) * (ONE + qp((2.0 * nf + 1.0) * u))
                    / (ONE - qp(2.0 * nf + 1.0));
            }
            PI / k * (qp(u / 2.0) / (ONE + qp(u)) + sum)
        }
    };
    let lhs = match which {
        Fourier::Sc => I * s,
        Fourier::Nc => c,
        Fourier::Dc => d,
    };
    Ok((lhs, rhs))
}

/// Upper-side sn on the cut two ways: mu^{1/2} sn([K(mu)+iK'(mu)]u | mu)
/// through the complex-argument theta quotients, against the explicit
/// addition-formula decomposition over real-parameter triples.
fn cut_continuation(u: f64, m: f64) -> Result<(Complex64, Complex64)> {
    if !(m > 1.0) {
        return Err(Error::Domain(format!("m = {m} not in (1, inf)")));
    }
    let mu = 1.0 / m;
    let ctx = build_context(Parameter::from_re(mu))?;
    let x = Complex64::new(u * PI / 2.0, 0.0) * (ONE + ctx.tau);
    let (sg, _, _) = triple_at_x(x, &ctx)?;
    let lhs = Complex64::new(mu.sqrt(), 0.0) * sg;
    let rhs = cut_sn(u, m, crate::param::CutSide::Above)?;
    Ok((lhs, rhs))
}
