use thiserror::Error;

/// Errors produced by the evaluation and search routines.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Input outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An iteration cap was reached before the convergence criterion fired.
    /// This signals a branch pathology or an out-of-envelope input rather
    /// than a tolerance problem.
    #[error("no convergence in {0} after {1} iterations")]
    NoConvergence(&'static str, usize),

    /// Nome too close to the unit circle for the theta series route.
    #[error("nome magnitude {0} too close to 1 for theta series")]
    NomeTooLarge(f64),

    /// A denominator that is nonzero in exact arithmetic fell below the
    /// pole guard threshold.
    #[error("pole or near-pole in {0}")]
    Pole(&'static str),

    /// A root finder was called on an interval that does not bracket a root.
    #[error("no root bracketed: {0}")]
    NoRoot(String),

    /// Internal consistency failure (e.g. a theta denominator that can
    /// never vanish for valid inputs evaluated to ~0).
    #[error("internal consistency failure in {0}")]
    Internal(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
