//! Jacobian elliptic functions at argument K(m)u, ratio functions, the
//! Jacobi zeta function, and the full-plane continuous modulus
//! sigma(u,m) = |sn(K(m)u|m)|.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::elliptic::{build_context, EllipticContext};
use crate::error::{Error, Result};
use crate::param::{CutSide, Parameter, Regime};
use crate::theta;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Magnitude below which a ratio denominator is treated as a pole.
pub const POLE_GUARD: f64 = 1e-13;

/// Magnitude below which a theta denominator (which cannot vanish for
/// valid inputs) is treated as an internal failure.
const THETA_DENOM_GUARD: f64 = 1e-300;

/// The values (sn, cn, dn) at argument K(m)u.
#[derive(Debug, Clone, Copy)]
pub struct JacobiTriple {
    pub u: f64,
    pub m: Complex64,
    /// sn(K(m)u | m)
    pub s: Complex64,
    /// cn(K(m)u | m)
    pub c: Complex64,
    /// dn(K(m)u | m)
    pub d: Complex64,
}

/// General-argument evaluation through theta quotients at x = pi z / (2K).
///
/// On the direct route:
///   sn = theta3(0) t1(x) / (t2(0) theta4(x)),
///   cn = theta4(0) t2(x) / (t2(0) theta4(x)),
///   dn = theta4(0) theta3(x) / (theta3(0) theta4(x)),
/// with t1, t2 the q^{1/4}-reduced theta1, theta2 sums. The complementary
/// route maps through Jacobi's imaginary transformation: the same three
/// quotients at x1 = tau1 x with the complementary nome.
pub fn triple_at_x(x: Complex64, ctx: &EllipticContext) -> Result<(Complex64, Complex64, Complex64)> {
    if ctx.use_complementary {
        let q1 = ctx.q1;
        let x1 = ctx.tau1() * x;
        let t2_x = theta::reduced2(x1, q1)?;
        if t2_x.norm() < THETA_DENOM_GUARD {
            return Err(Error::Internal("complementary theta denominator"));
        }
        let t2_0 = theta::reduced2(ZERO, q1)?;
        let th3_0 = theta::theta3(ZERO, q1)?;
        let th4_0 = theta::theta4(ZERO, q1)?;
        let sn = -I * th3_0 * theta::reduced1(x1, q1)? / (th4_0 * t2_x);
        let cn = t2_0 * theta::theta4(x1, q1)? / (th4_0 * t2_x);
        let dn = t2_0 * theta::theta3(x1, q1)? / (th3_0 * t2_x);
        Ok((sn, cn, dn))
    } else {
        let q = ctx.q;
        let th4_x = theta::theta4(x, q)?;
        if th4_x.norm() < THETA_DENOM_GUARD {
            return Err(Error::Internal("theta4 denominator"));
        }
        let t2_0 = theta::reduced2(ZERO, q)?;
        let th3_0 = theta::theta3(ZERO, q)?;
        let th4_0 = theta::theta4(ZERO, q)?;
        let sn = th3_0 * theta::reduced1(x, q)? / (t2_0 * th4_x);
        let cn = th4_0 * theta::reduced2(x, q)? / (t2_0 * th4_x);
        let dn = th4_0 * theta::theta3(x, q)? / (th3_0 * th4_x);
        Ok((sn, cn, dn))
    }
}

/// sn, cn, dn at argument K(m)u for u in [0, 2], m off the cut and not 1.
pub fn jacobi_triple(u: f64, ctx: &EllipticContext) -> Result<JacobiTriple> {
    match ctx.param.regime() {
        Regime::One => {
            return Err(Error::Domain(
                "jacobi_triple: m = 1 has no finite K; use the limit-aware sigma".into(),
            ))
        }
        Regime::Cut => {
            return Err(Error::Domain(
                "jacobi_triple: cut parameters take the one-sided route (cut_triple/sigma)".into(),
            ))
        }
        _ => {}
    }
    if !(0.0..=2.0).contains(&u) {
        return Err(Error::Domain(format!("jacobi_triple: u = {u} outside [0, 2]")));
    }
    let x = Complex64::new(u * PI / 2.0, 0.0);
    let (s, c, d) = triple_at_x(x, ctx)?;
    Ok(JacobiTriple { u, m: ctx.param.m(), s, c, d })
}

/// One-sided values of (sn, cn, dn) at argument K(m)u for real m > 1.
///
/// Obtained from the reciprocal-parameter transformation: with mu = 1/m,
/// z = [K(mu) +/- i K'(mu)] u, sn(K(m)u|m) = mu^{1/2} sn(z|mu),
/// cn(K(m)u|m) = dn(z|mu), dn(K(m)u|m) = cn(z|mu); sign by side.
pub fn cut_triple(u: f64, m: f64, side: CutSide) -> Result<JacobiTriple> {
    if !(m > 1.0) {
        return Err(Error::Domain(format!("cut_triple: m = {m} not in (1, inf)")));
    }
    if !(0.0..=2.0).contains(&u) {
        return Err(Error::Domain(format!("cut_triple: u = {u} outside [0, 2]")));
    }
    let sign = match side {
        CutSide::Above => 1.0,
        CutSide::Below => -1.0,
        CutSide::None => {
            return Err(Error::Domain("cut_triple: side tag required".into()))
        }
    };
    let mu = 1.0 / m;
    let ctx = build_context(Parameter::from_re(mu))?;
    // x = pi z / (2 K(mu)) = (pi u / 2)(1 +/- tau(mu))
    let x = Complex64::new(u * PI / 2.0, 0.0) * (ONE + sign * ctx.tau);
    let (sg, cg, dg) = triple_at_x(x, &ctx)?;
    let root = Complex64::new(mu.sqrt(), 0.0);
    Ok(JacobiTriple {
        u,
        m: Complex64::new(m, 0.0),
        s: root * sg,
        c: dg,
        d: cg,
    })
}

/// Ratio functions of the triple entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RatioKind {
    Sc,
    Nc,
    Dc,
    Sd,
    Cd,
    Ns,
}

/// Evaluate a quotient of Jacobi functions at argument K(m)u.
pub fn jacobi_ratio(kind: RatioKind, u: f64, ctx: &EllipticContext) -> Result<Complex64> {
    let t = jacobi_triple(u, ctx)?;
    let (num, den) = match kind {
        RatioKind::Sc => (t.s, t.c),
        RatioKind::Nc => (ONE, t.c),
        RatioKind::Dc => (t.d, t.c),
        RatioKind::Sd => (t.s, t.d),
        RatioKind::Cd => (t.c, t.d),
        RatioKind::Ns => (ONE, t.s),
    };
    if den.norm() < POLE_GUARD {
        return Err(Error::Pole("jacobi_ratio denominator"));
    }
    Ok(num / den)
}

/// Jacobi zeta function at argument K(m)u, real m in (0, 1).
///
/// Computed from the logarithmic x-derivative of theta4:
/// zn(K u | m) = (pi / 2K) theta4'(pi u / 2) / theta4(pi u / 2).
pub fn jacobi_zeta(u: f64, ctx: &EllipticContext) -> Result<f64> {
    let m = ctx.param.m();
    if m.im != 0.0 || !(0.0 < m.re && m.re < 1.0) {
        return Err(Error::Domain(format!(
            "jacobi_zeta: m = {m} not real in (0, 1)"
        )));
    }
    if !(0.0..=2.0).contains(&u) {
        return Err(Error::Domain(format!("jacobi_zeta: u = {u} outside [0, 2]")));
    }
    let x = Complex64::new(u * PI / 2.0, 0.0);
    let num = theta::theta4_dx(x, ctx.q)?;
    let den = theta::theta4(x, ctx.q)?;
    Ok((PI / (2.0 * ctx.k.re)) * (num / den).re)
}

/// Which evaluation route produced a sigma value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SigmaRoute {
    ThetaQuotient,
    CutFormula,
    LimitAtOne,
}

/// sigma(u,m) = |sn(K(m)u|m)| with its continuous extension to all of C.
#[derive(Debug, Clone, Copy)]
pub struct SigmaValue {
    pub u: f64,
    pub m: Complex64,
    pub sigma: f64,
    pub route: SigmaRoute,
}

/// Squared modulus of sn(K(m)u|m) on the cut, side-independent:
/// mu (s^2 d1^2 + c^2 d^2 s1^2 c1^2) / (1 - d^2 s1^2)^2 with real-parameter
/// triples at mu = 1/m and mu1 = 1 - mu.
pub fn cut_sigma_sq(u: f64, m: f64) -> Result<f64> {
    let mu = 1.0 / m;
    let mu1 = 1.0 - mu;
    let a = jacobi_triple(u, &build_context(Parameter::from_re(mu))?)?;
    let b = jacobi_triple(u, &build_context(Parameter::from_re(mu1))?)?;
    let (s, c, d) = (a.s.re, a.c.re, a.d.re);
    let (s1, c1, d1) = (b.s.re, b.c.re, b.d.re);
    let den = 1.0 - d * d * s1 * s1;
    Ok(mu * (s * s * d1 * d1 + c * c * d * d * s1 * s1 * c1 * c1) / (den * den))
}

/// The continuous extension of |sn(K(m)u|m)| to the whole plane:
/// theta route off the cut, the real-parameter cut formula on (1, inf),
/// exactly 1 at m = 1.
pub fn sigma(u: f64, p: &Parameter) -> Result<SigmaValue> {
    if !(0.0 < u && u < 1.0) {
        return Err(Error::Domain(format!("sigma: u = {u} outside (0, 1)")));
    }
    let m = p.m();
    match p.regime() {
        Regime::One => Ok(SigmaValue { u, m, sigma: 1.0, route: SigmaRoute::LimitAtOne }),
        Regime::Cut => Ok(SigmaValue {
            u,
            m,
            sigma: cut_sigma_sq(u, m.re)?.sqrt(),
            route: SigmaRoute::CutFormula,
        }),
        _ => {
            let ctx = build_context(*p)?;
            let t = jacobi_triple(u, &ctx)?;
            Ok(SigmaValue { u, m, sigma: t.s.norm(), route: SigmaRoute::ThetaQuotient })
        }
    }
}

/// Leading-order reference predictions from the m -> 0 and m -> 1
/// expansions; pure formula evaluation, no series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AsymKind {
    /// sn(K u|m) -> sin(pi u/2) as m -> 0
    Sn0,
    /// cn(K u|m) -> cos(pi u/2) as m -> 0
    Cn0,
    /// dn(K u|m) -> 1 as m -> 0
    Dn0,
    /// sn(K u|m) -> 1 - 2^{1-4u} (1-m)^u as m -> 1
    Sn1,
    /// cn(K u|m) -> 2^{1-2u} (1-m)^{u/2} as m -> 1
    Cn1,
    /// dn(K u|m) -> 2^{1-2u} (1-m)^{u/2} as m -> 1
    Dn1,
    /// sc(tau K u|m) -> i - i 2^{1-4u} m^u as m -> 0
    Sc0,
    /// nc(tau K u|m) -> 2^{1-2u} m^{u/2} as m -> 0
    Nc0,
    /// dc(tau K u|m) -> 2^{1-2u} m^{u/2} as m -> 0
    Dc0,
}

pub fn asym_ref(which: AsymKind, u: f64, m: Complex64) -> Complex64 {
    let m1 = ONE - m;
    match which {
        AsymKind::Sn0 => Complex64::new((PI * u / 2.0).sin(), 0.0),
        AsymKind::Cn0 => Complex64::new((PI * u / 2.0).cos(), 0.0),
        AsymKind::Dn0 => ONE,
        AsymKind::Sn1 => ONE - 2f64.powf(1.0 - 4.0 * u) * m1.powf(u),
        AsymKind::Cn1 | AsymKind::Dn1 => 2f64.powf(1.0 - 2.0 * u) * m1.powf(u / 2.0),
        AsymKind::Sc0 => I * (ONE - 2f64.powf(1.0 - 4.0 * u) * m.powf(u)),
        AsymKind::Nc0 | AsymKind::Dc0 => 2f64.powf(1.0 - 2.0 * u) * m.powf(u / 2.0),
    }
}

/// One-sided complex sn value on the cut via the addition-formula route:
/// mu^{1/2} (s d1 +/- i c d s1 c1) / (1 - d^2 s1^2), sign by side.
pub fn cut_sn(u: f64, m: f64, side: CutSide) -> Result<Complex64> {
    let sign = match side {
        CutSide::Above => 1.0,
        CutSide::Below => -1.0,
        CutSide::None => return Err(Error::Domain("cut_sn: side tag required".into())),
    };
    let mu = 1.0 / m;
    let mu1 = 1.0 - mu;
    let a = jacobi_triple(u, &build_context(Parameter::from_re(mu))?)?;
    let b = jacobi_triple(u, &build_context(Parameter::from_re(mu1))?)?;
    let (s, c, d) = (a.s, a.c, a.d);
    let (s1, c1, d1) = (b.s, b.c, b.d);
    let num = s * d1 + sign * I * c * d * s1 * c1;
    let den = ONE - d * d * s1 * s1;
    Ok(Complex64::new(mu.sqrt(), 0.0) * num / den)
}
