use num_complex::Complex64;

use crate::error::{Error, Result};

/// Which half-plane a real parameter m > 1 is approached from.
///
/// The interval [1, inf) is a branch cut of K(m) and of sn(K(m)u|m); the
/// one-sided limits differ by complex conjugation, so the side is part of
/// the parameter, not of the call site.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CutSide {
    None,
    Above,
    Below,
}

/// Region of the complex plane a parameter falls in.
///
/// The classification mirrors the geometry that controls the behaviour of
/// sigma(u,m): the open unit disk D, its boundary, the lens D1 \ closure(D)
/// around m = 1, the branch cut (1, inf), the exterior, and the singular
/// point m = 1 itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    UnitDiskInterior,
    UnitCircle,
    Lens,
    Cut,
    Exterior,
    One,
}

/// A complex parameter m together with its branch-cut side tag and region
/// classification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Parameter {
    m: Complex64,
    side: CutSide,
    regime: Regime,
}

fn classify(m: Complex64) -> Regime {
    if m == Complex64::new(1.0, 0.0) {
        return Regime::One;
    }
    if m.im == 0.0 && m.re > 1.0 {
        return Regime::Cut;
    }
    let r = m.norm();
    if r < 1.0 {
        Regime::UnitDiskInterior
    } else if r == 1.0 {
        Regime::UnitCircle
    } else if (m - Complex64::new(1.0, 0.0)).norm() < 1.0 {
        Regime::Lens
    } else {
        Regime::Exterior
    }
}

impl Parameter {
    /// Classify m. A real m > 1 gets the `Above` side by default; use
    /// [`Parameter::with_side`] to pick the lower limit.
    pub fn new(m: Complex64) -> Self {
        let regime = classify(m);
        let side = if regime == Regime::Cut {
            CutSide::Above
        } else {
            CutSide::None
        };
        Parameter { m, side, regime }
    }

    /// Construct with an explicit side tag. The side must be `Above` or
    /// `Below` exactly when m is real with m > 1, and `None` otherwise.
    pub fn with_side(m: Complex64, side: CutSide) -> Result<Self> {
        let regime = classify(m);
        let on_cut = regime == Regime::Cut;
        match (on_cut, side) {
            (true, CutSide::None) => Err(Error::Domain(format!(
                "m = {m} lies on the cut; a side tag is required"
            ))),
            (false, CutSide::Above) | (false, CutSide::Below) => Err(Error::Domain(format!(
                "m = {m} is off the cut; side must be None"
            ))),
            _ => Ok(Parameter { m, side, regime }),
        }
    }

    pub fn from_re(re: f64) -> Self {
        Self::new(Complex64::new(re, 0.0))
    }

    pub fn m(&self) -> Complex64 {
        self.m
    }

    pub fn side(&self) -> CutSide {
        self.side
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    /// Complementary parameter m1 = 1 - m.
    pub fn complementary(&self) -> Complex64 {
        Complex64::new(1.0, 0.0) - self.m
    }

    /// Reciprocal parameter mu = 1/m.
    pub fn reciprocal(&self) -> Complex64 {
        Complex64::new(1.0, 0.0) / self.m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn regime_classification() {
        assert_eq!(Parameter::new(c(0.5, 0.0)).regime(), Regime::UnitDiskInterior);
        assert_eq!(Parameter::new(c(0.3, 0.4)).regime(), Regime::UnitDiskInterior);
        assert_eq!(Parameter::new(c(1.0, 0.0)).regime(), Regime::One);
        assert_eq!(Parameter::new(c(1.5, 0.0)).regime(), Regime::Cut);
        assert_eq!(Parameter::new(c(1.2, 0.3)).regime(), Regime::Lens);
        assert_eq!(Parameter::new(c(-5.0, 0.0)).regime(), Regime::Exterior);
        assert_eq!(Parameter::new(c(0.0, 3.0)).regime(), Regime::Exterior);
        assert_eq!(Parameter::new(c(-1.0, 0.0)).regime(), Regime::UnitCircle);
    }

    #[test]
    fn side_iff_cut() {
        // side != None exactly when m is real and > 1
        assert_eq!(Parameter::new(c(1.5, 0.0)).side(), CutSide::Above);
        assert_eq!(Parameter::new(c(0.5, 0.0)).side(), CutSide::None);
        assert_eq!(Parameter::new(c(1.5, 0.1)).side(), CutSide::None);
        assert!(Parameter::with_side(c(2.0, 0.0), CutSide::Below).is_ok());
        assert!(Parameter::with_side(c(2.0, 0.0), CutSide::None).is_err());
        assert!(Parameter::with_side(c(0.5, 0.0), CutSide::Above).is_err());
        // m = 1 is its own regime, not a cut point
        assert!(Parameter::with_side(c(1.0, 0.0), CutSide::Above).is_err());
    }

    #[test]
    fn reclassification_is_consistent() {
        for &(re, im) in &[(0.99, 0.0), (1.01, 0.0), (1.0, 1e-12), (-0.5, 0.5), (7.0, -3.0)] {
            let p = Parameter::new(c(re, im));
            let again = Parameter::new(p.m());
            assert_eq!(p.regime(), again.regime());
            assert_eq!(p.side(), again.side());
        }
    }
}
