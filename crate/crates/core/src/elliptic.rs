//! Complete elliptic integrals, nome and tau for complex parameter m,
//! with controlled one-sided limits on the branch cut [1, inf).

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::param::{CutSide, Parameter, Regime};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Iteration cap for the AGM; quadratic convergence needs < 20 steps at
/// double precision everywhere off the pathological ray b/a < 0.
pub const AGM_MAX_ITER: usize = 64;

/// Optimal-branch arithmetic-geometric mean.
///
/// At each step the square-root sign is chosen so that
/// |a' - b'| <= |a' + b'|, ties broken toward nonnegative real part of
/// b'/a' (and nonnegative imaginary part when the real part vanishes).
pub fn agm(a0: Complex64, b0: Complex64) -> Result<Complex64> {
    if a0 == ZERO && b0 == ZERO {
        return Err(Error::Domain("agm(0, 0) is undefined".into()));
    }
    if a0 == ZERO || b0 == ZERO {
        // geometric mean collapses to 0 immediately
        return Ok(ZERO);
    }
    let mut a = a0;
    let mut b = b0;
    for _ in 0..AGM_MAX_ITER {
        let a1 = (a + b) / 2.0;
        let mut b1 = (a * b).sqrt();
        let d_minus = (a1 - b1).norm();
        let d_plus = (a1 + b1).norm();
        if d_minus > d_plus {
            b1 = -b1;
        } else if d_minus == d_plus {
            let r = b1 / a1;
            if r.re < 0.0 || (r.re == 0.0 && r.im < 0.0) {
                b1 = -b1;
            }
        }
        a = a1;
        b = b1;
        if (a - b).norm() <= 1e-15 * a.norm() {
            return Ok((a + b) / 2.0);
        }
    }
    Err(Error::NoConvergence("agm", AGM_MAX_ITER))
}

/// Complete elliptic integral of the first kind K(m), analytic on the cut
/// plane C \ [1, inf). Real m >= 1 is rejected here; cut-side limits are
/// the caller's business via the connection formula.
pub fn complete_k(m: Complex64) -> Result<Complex64> {
    if m.im == 0.0 && m.re >= 1.0 {
        return Err(Error::Domain(format!(
            "K(m) is not defined on the cut [1, inf): m = {m}"
        )));
    }
    Ok(Complex64::new(PI / 2.0, 0.0) / agm(ONE, (ONE - m).sqrt())?)
}

/// K'(m) = K(1 - m); the cut of K at [1, inf) maps to m in (-inf, 0].
pub fn complete_kprime(m: Complex64) -> Result<Complex64> {
    if m.im == 0.0 && m.re <= 0.0 {
        return Err(Error::Domain(format!(
            "K'(m) is not defined for real m <= 0: m = {m}"
        )));
    }
    complete_k(ONE - m)
}

/// Cached K, K', tau and nomes for one parameter; every downstream
/// evaluation flows through this.
#[derive(Debug, Clone, Copy)]
pub struct EllipticContext {
    pub param: Parameter,
    /// K(m); one-sided limit for cut parameters, infinite at m = 1.
    pub k: Complex64,
    /// K'(m) = K(1 - m); for real m < 0 this is the upper boundary value,
    /// consistent with the nome below.
    pub kprime: Complex64,
    /// tau = i K'/K.
    pub tau: Complex64,
    /// Nome q = exp(i pi tau).
    pub q: Complex64,
    /// Complementary nome exp(i pi tau_1), tau_1 = -1/tau.
    pub q1: Complex64,
    /// Evaluate series through the complementary nome. Set when |q| > 0.5
    /// and the switch actually helps (|q1| <= |q|).
    pub use_complementary: bool,
}

impl EllipticContext {
    pub fn tau1(&self) -> Complex64 {
        -ONE / self.tau
    }
}

fn route_flags(q: Complex64, q1: Complex64) -> bool {
    q.norm() > 0.5 && q1.norm() <= q.norm()
}

/// Build the evaluation context for a parameter.
///
/// Off the cut this is K, K' by AGM and q = exp(-pi K'/K). On the cut the
/// K value is the one-sided limit from the connection formula
/// K(m) = mu^{1/2} [K(mu) +/- i K'(mu)], mu = 1/m, sign by side. For real
/// m < 0 (the cut of K'), the nome comes from the level-two transformation
/// q(m) = -q(m/(m-1)) and K' is defined as -i tau K, the upper boundary
/// value. m = 1 yields a tagged limit object with no finite K.
pub fn build_context(p: Parameter) -> Result<EllipticContext> {
    let m = p.m();
    match p.regime() {
        Regime::One => Ok(EllipticContext {
            param: p,
            k: Complex64::new(f64::INFINITY, 0.0),
            kprime: Complex64::new(PI / 2.0, 0.0),
            tau: ZERO,
            q: ONE,
            q1: ZERO,
            use_complementary: true,
        }),
        Regime::Cut => {
            let mu = 1.0 / m.re;
            let k_mu = complete_k(Complex64::new(mu, 0.0))?;
            let kp_mu = complete_k(Complex64::new(1.0 - mu, 0.0))?;
            let root = Complex64::new(mu.sqrt(), 0.0);
            let k = match p.side() {
                CutSide::Above => root * (k_mu + I * kp_mu),
                CutSide::Below => root * (k_mu - I * kp_mu),
                CutSide::None => unreachable!("cut regime always carries a side"),
            };
            let kprime = complete_k(ONE - m)?; // 1 - m < 0, off the cut of K
            let tau = I * kprime / k;
            let q = (I * PI * tau).exp();
            let q1 = (-I * PI / tau).exp();
            Ok(EllipticContext {
                param: p,
                k,
                kprime,
                tau,
                q,
                q1,
                use_complementary: route_flags(q, q1),
            })
        }
        _ => {
            if m == ZERO {
                return Ok(EllipticContext {
                    param: p,
                    k: Complex64::new(PI / 2.0, 0.0),
                    kprime: Complex64::new(f64::INFINITY, 0.0),
                    tau: Complex64::new(0.0, f64::INFINITY),
                    q: ZERO,
                    q1: ONE,
                    use_complementary: false,
                });
            }
            let k = complete_k(m)?;
            let (kprime, tau, q) = if m.im == 0.0 && m.re < 0.0 {
                // K' sits on its cut; route the nome through m/(m-1) in (0,1)
                let m_alt = m.re / (m.re - 1.0);
                let k_alt = complete_k(Complex64::new(m_alt, 0.0))?;
                let kp_alt = complete_k(Complex64::new(1.0 - m_alt, 0.0))?;
                let t = kp_alt.re / k_alt.re;
                let tau = Complex64::new(1.0, t);
                let q = Complex64::new(-(-PI * t).exp(), 0.0);
                (-I * tau * k, tau, q)
            } else {
                let kprime = complete_kprime(m)?;
                let tau = I * kprime / k;
                (kprime, tau, (I * PI * tau).exp())
            };
            let q1 = (-I * PI / tau).exp();
            Ok(EllipticContext {
                param: p,
                k,
                kprime,
                tau,
                q,
                q1,
                use_complementary: route_flags(q, q1),
            })
        }
    }
}
