//! Jacobian elliptic functions with complex parameter m and the extremal
//! analysis of sigma(u,m) = |sn(K(m)u|m)|.
//!
//! The pipeline is: parameter classification ([`Parameter`]), cached
//! K/K'/tau/nome ([`EllipticContext`]), theta-quotient evaluation of
//! sn, cn, dn ([`jacobi_triple`]), and the continuous modulus [`sigma`]
//! defined on the whole plane including the branch cut [1, inf) and the
//! singular point m = 1. On top of that sit the extremal searches (the
//! level root m-tilde, the cut maxima, the global maximum, sigma = 1
//! region contours), Laplace-type integrals along [0, 2K(m)] with their
//! Jacobi-matrix difference equation, and the verification suites the CLI
//! exposes.

pub mod elliptic;
pub mod error;
pub mod extremal;
pub mod jacobi;
pub mod oracle;
pub mod param;
pub mod spectral;
pub mod suites;
pub mod theta;

pub use elliptic::{agm, build_context, complete_k, complete_kprime, EllipticContext};
pub use error::{Error, Result};
pub use extremal::{
    global_max, m_tilde, max_on_cut, phi, region_scan, ContourPolyline, ExtremalResult,
    GlobalMax, RegionGrid, Window,
};
pub use jacobi::{
    asym_ref, cut_sigma_sq, cut_sn, cut_triple, jacobi_ratio, jacobi_triple, jacobi_zeta, sigma,
    triple_at_x, AsymKind, JacobiTriple, RatioKind, SigmaRoute, SigmaValue,
};
pub use oracle::{landen_sn, oracle_eval, OracleId};
pub use param::{CutSide, Parameter, Regime};
pub use spectral::{
    cd_integral, cd_integral_with_rule, integrate_segment, integrate_segment_fixed,
    jacobi_residual, jacobi_residual_with_rule, saddle_check, truncated_eigenvalues, v_sequence,
    v_sequence_with_rule, CdKind, QuadratureRule, SaddleFn, VSequence,
};
pub use suites::{run_all, run_asymptotics, run_identities, run_spectral, run_theorem1, CheckReport};
pub use theta::theta;

/// Re-export of the complex scalar type used throughout.
pub use num_complex::Complex64;
