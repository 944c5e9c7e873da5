//! Jacobi theta functions as truncated q-series.
//!
//! Series terms are accumulated in exponential form
//! exp(a_n * ln q +/- i b_n x) so that a large |Im x| (which occurs on the
//! complementary-nome route) never materialises an overflowing trig factor
//! against a vanishing q-power; the combined exponent stays bounded for
//! every argument the library produces.
//!
//! theta1 and theta2 carry a q^{1/4} prefactor. The internal "reduced" sums
//! leave it out, so all quotients used for sn, cn, dn are built from integer
//! powers of q only and stay finite as q -> 0.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Hard cap on series terms. Convergence needs ~sqrt(ln(eps)/ln|q|) terms,
/// which is below 20 for |q| <= 0.5 and below 64 up to the 0.99 guard.
pub const MAX_TERMS: usize = 64;

/// Nome magnitudes at or above this are rejected; callers must switch to
/// the complementary nome first.
pub const MAX_NOME_ABS: f64 = 0.99;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Clone, Copy, PartialEq)]
enum Kind {
    /// sum (-1)^n q^{n(n+1)} sin((2n+1)x)   [theta1 / (2 q^{1/4})]
    Reduced1,
    /// sum q^{n(n+1)} cos((2n+1)x)          [theta2 / (2 q^{1/4})]
    Reduced2,
    /// 1 + 2 sum q^{n^2} cos(2nx)
    Three,
    /// 1 + 2 sum (-1)^n q^{n^2} cos(2nx)
    Four,
    /// d/dx of Four: -4 sum (-1)^n n q^{n^2} sin(2nx)
    FourDx,
}

fn series(kind: Kind, x: Complex64, q: Complex64) -> Result<Complex64> {
    if q == ZERO {
        return Ok(match kind {
            Kind::Reduced1 => x.sin(),
            Kind::Reduced2 => x.cos(),
            Kind::Three | Kind::Four => ONE,
            Kind::FourDx => ZERO,
        });
    }
    let log_q = q.ln();
    let (mut sum, start) = match kind {
        Kind::Reduced1 | Kind::Reduced2 => (ZERO, 0usize),
        Kind::Three | Kind::Four => (ONE, 1usize),
        Kind::FourDx => (ZERO, 1usize),
    };
    let mut small_streak = 0usize;
    for n in start..MAX_TERMS {
        let nf = n as f64;
        // exponent a_n of q and frequency b_n of the trig factor
        let (a, b) = match kind {
            Kind::Reduced1 | Kind::Reduced2 => (nf * (nf + 1.0), 2.0 * nf + 1.0),
            _ => (nf * nf, 2.0 * nf),
        };
        let ep = (log_q * a + I * b * x).exp();
        let em = (log_q * a - I * b * x).exp();
        let alternating = if n % 2 == 0 { 1.0 } else { -1.0 };
        let term = match kind {
            Kind::Reduced1 => (ep - em) / (2.0 * I) * alternating,
            Kind::Reduced2 => (ep + em) / 2.0,
            Kind::Three => ep + em,
            Kind::Four => (ep + em) * alternating,
            Kind::FourDx => (ep - em) * I * (2.0 * nf) * alternating,
        };
        sum += term;
        if term.norm() <= f64::EPSILON * sum.norm() {
            small_streak += 1;
            if small_streak >= 2 {
                return Ok(sum);
            }
        } else {
            small_streak = 0;
        }
    }
    Err(Error::NoConvergence("theta series", MAX_TERMS))
}

fn check_nome(q: Complex64) -> Result<()> {
    let a = q.norm();
    if a >= MAX_NOME_ABS {
        return Err(Error::NomeTooLarge(a));
    }
    Ok(())
}

/// theta_j(x, q) for j in 1..=4, standard q-series convention with
/// argument x (so the elliptic argument z maps to x = pi z / (2K)).
pub fn theta(j: u8, x: Complex64, q: Complex64) -> Result<Complex64> {
    check_nome(q)?;
    match j {
        1 => Ok(2.0 * quarter_power(q) * series(Kind::Reduced1, x, q)?),
        2 => Ok(2.0 * quarter_power(q) * series(Kind::Reduced2, x, q)?),
        3 => series(Kind::Three, x, q),
        4 => series(Kind::Four, x, q),
        _ => Err(Error::Domain(format!("theta index {j} out of 1..=4"))),
    }
}

/// Principal q^{1/4}.
fn quarter_power(q: Complex64) -> Complex64 {
    if q == ZERO {
        ZERO
    } else {
        (q.ln() / 4.0).exp()
    }
}

/// theta1(x,q) / (2 q^{1/4}); finite and nonzero in the q -> 0 limit.
pub(crate) fn reduced1(x: Complex64, q: Complex64) -> Result<Complex64> {
    check_nome(q)?;
    series(Kind::Reduced1, x, q)
}

/// theta2(x,q) / (2 q^{1/4}).
pub(crate) fn reduced2(x: Complex64, q: Complex64) -> Result<Complex64> {
    check_nome(q)?;
    series(Kind::Reduced2, x, q)
}

pub(crate) fn theta3(x: Complex64, q: Complex64) -> Result<Complex64> {
    check_nome(q)?;
    series(Kind::Three, x, q)
}

pub(crate) fn theta4(x: Complex64, q: Complex64) -> Result<Complex64> {
    check_nome(q)?;
    series(Kind::Four, x, q)
}

/// d/dx theta4(x,q); used by the Jacobi zeta function.
pub(crate) fn theta4_dx(x: Complex64, q: Complex64) -> Result<Complex64> {
    check_nome(q)?;
    series(Kind::FourDx, x, q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn theta1_odd_vanishes_at_zero() {
        for &q in &[c(0.1, 0.0), c(0.02, 0.3), c(-0.4, 0.1)] {
            let v = theta(1, ZERO, q).unwrap();
            assert!(v.norm() < 1e-15, "theta1(0,{q}) = {v}");
        }
    }

    #[test]
    fn theta3_at_zero_nome_is_one() {
        assert_eq!(theta(3, c(0.7, 0.0), ZERO).unwrap(), ONE);
        assert_eq!(theta(4, c(0.7, 0.0), ZERO).unwrap(), ONE);
    }

    #[test]
    fn nome_guard() {
        assert!(matches!(
            theta(3, ZERO, c(0.995, 0.0)),
            Err(Error::NomeTooLarge(_))
        ));
    }

    // Reference values computed with mpmath 1.3 (jtheta).
    #[test]
    fn reference_values() {
        let cases: &[(u8, f64, Complex64, Complex64)] = &[
            (3, 0.3, c(0.1, 0.0), c(1.1651395940784266573, 0.0)),
            (1, 0.7, c(0.2, 0.0), c(0.81541761243338517389, 0.0)),
            (2, 0.4, c(0.15, 0.05), c(1.1664185619751397116, 0.10089627246833626834)),
            (4, 1.1, c(0.15, 0.05), c(1.1764428825217492406, 0.058481283715417580639)),
        ];
        for &(j, x, q, want) in cases {
            let got = theta(j, c(x, 0.0), q).unwrap();
            assert!(
                (got - want).norm() < 1e-14,
                "theta{j}({x},{q}) = {got}, want {want}"
            );
        }
    }

    #[test]
    fn quasi_periodicity_in_x() {
        // theta3(x + pi) = theta3(x); theta4(x + pi) = theta4(x)
        let q = c(0.12, 0.07);
        for &x in &[0.2, 0.9, 2.4] {
            let x0 = c(x, 0.0);
            let x1 = c(x + PI, 0.0);
            assert!((theta(3, x0, q).unwrap() - theta(3, x1, q).unwrap()).norm() < 1e-14);
            assert!((theta(4, x0, q).unwrap() - theta(4, x1, q).unwrap()).norm() < 1e-14);
        }
    }

    #[test]
    fn truncation_is_converged() {
        // Doubling the cap must not move any sampled value: the streak rule
        // already stops on two sub-epsilon terms well before MAX_TERMS.
        let q = c(0.45, 0.2);
        for &x in &[0.0, 0.3, 1.2] {
            let v = theta(3, c(x, 0.0), q).unwrap();
            // brute-force long sum
            let mut s = ONE;
            for n in 1..200 {
                let nf = n as f64;
                s += 2.0 * q.powf(nf * nf) * (c(2.0 * nf * x, 0.0)).cos();
            }
            assert!((v - s).norm() <= 1e-13 * s.norm().max(1.0));
        }
    }

    #[test]
    fn complex_argument_no_overflow() {
        // Im x large enough that sin((2n+1)x) alone would overflow f64.
        let q = c(1e-8, 0.0);
        let x = c(0.5, 18.5);
        let v = theta(1, x, q).unwrap();
        assert!(v.is_finite(), "got {v}");
    }
}
