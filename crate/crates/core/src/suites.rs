//! Verification suites: sampled identity, bound, asymptotics and spectral
//! checks with pinned tolerances. The CLI `verify` subcommand and the
//! acceptance tests both run these.

use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

use crate::elliptic::{build_context, complete_k};
use crate::error::Result;
use crate::extremal::{global_max, m_tilde, max_on_cut, phi};
use crate::jacobi::{
    cut_sigma_sq, jacobi_ratio, jacobi_triple, jacobi_zeta, sigma, triple_at_x, RatioKind,
};
use crate::oracle::{oracle_eval, OracleId};
use crate::param::{CutSide, Parameter};
use crate::spectral::{
    cd_integral, integrate_segment_fixed, jacobi_residual, saddle_check, truncated_eigenvalues,
    v_sequence, CdKind, QuadratureRule, SaddleFn,
};
use crate::theta;

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Identity agreement tolerance (oracles, connection formula, circle
/// formulas, the cut alternative formula).
const IDENTITY_TOL: f64 = 1e-10;
/// Fundamental sn/cn/dn identity tolerance on random samples.
const FUNDAMENTAL_TOL: f64 = 1e-10;
/// Conjugation symmetry tolerance.
const CONJUGATION_TOL: f64 = 1e-12;
/// Theta truncation stability (relative).
const THETA_TRUNC_TOL: f64 = 1e-13;
/// Modular identity theta2^4/theta3^4 = m.
const MODULAR_TOL: f64 = 1e-12;
/// Final asymptotic-ladder ratio error at the smallest offset.
const ASYM_FINAL_TOL: f64 = 5e-2;
/// Ladder errors below this are rounding noise; monotonicity is not
/// enforced beneath it.
const ASYM_NOISE_FLOOR: f64 = 1e-12;
/// Nome expansion ratio tolerance at m = 1e-4.
const NOME_EXPANSION_TOL: f64 = 1e-6;
/// Distance of the located global maximum from the reported point.
const GLOBAL_MAX_UM_TOL: f64 = 5e-3;
const GLOBAL_MAX_SIGMA_TOL: f64 = 1e-3;
/// Eq. for the parameter derivative of dc versus central differences.
const DC_DERIVATIVE_TOL: f64 = 1e-6;
/// sigma(u, m-tilde(u)) = 1 tolerance.
const MTILDE_LEVEL_TOL: f64 = 1e-8;
/// Interior residual rows of the difference equation.
const RESIDUAL_TOL: f64 = 1e-8;
/// Truncated-matrix eigenvalues against the lattice.
const EIGENVALUE_TOL: f64 = 1e-3;
/// Final Laplace-integral asymptotic ratio error at l = 128.
const LAPLACE_FINAL_TOL: f64 = 0.15;

/// One verification check: a name, how many samples it looked at, the
/// worst error metric seen, and whether that is within its threshold.
/// For strict-bound checks `max_error` is the signed margin (max sigma
/// minus 1), so passing values are negative.
#[derive(Debug, Clone)]
pub struct CheckReport {
    pub name: &'static str,
    pub samples: usize,
    pub max_error: f64,
    pub pass: bool,
}

impl CheckReport {
    fn thresholded(name: &'static str, samples: usize, max_error: f64, tol: f64) -> Self {
        CheckReport { name, samples, max_error, pass: max_error <= tol }
    }

    fn strict_bound(name: &'static str, samples: usize, margin: f64) -> Self {
        CheckReport { name, samples, max_error: margin, pass: margin < 0.0 }
    }
}

/// True when every report passed.
pub fn all_pass(reports: &[CheckReport]) -> bool {
    reports.iter().all(|r| r.pass)
}

/// Van der Corput radical inverse; bases 2 and 3 give the 2-D
/// quasi-random sequence used for parameter sampling.
pub fn halton(mut index: u64, base: u64) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while index > 0 {
        f /= base as f64;
        r += f * (index % base) as f64;
        index /= base;
    }
    r
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

// ---------------------------------------------------------------------
// identities
// ---------------------------------------------------------------------

fn oracle_check(
    name: &'static str,
    id: OracleId,
    points: &[(f64, Complex64)],
) -> Result<CheckReport> {
    let mut max_error = 0.0f64;
    for &(u, p) in points {
        let (lhs, rhs) = oracle_eval(id, u, p)?;
        max_error = max_error.max((lhs - rhs).norm());
    }
    Ok(CheckReport::thresholded(name, points.len(), max_error, IDENTITY_TOL))
}

pub fn run_identities() -> Result<Vec<CheckReport>> {
    let mut reports = Vec::new();
    let u_grid = [0.15, 0.3, 0.45, 0.6, 0.75, 0.9];

    // the two circle oracles over theta in (0, pi/4]
    let mut circle_pts = Vec::new();
    for i in 1..=25 {
        let th = PI / 4.0 * i as f64 / 25.0;
        for &u in &u_grid {
            circle_pts.push((u, c(th, 0.0)));
        }
    }
    reports.push(oracle_check(
        "oracle_unit_circle_sn2",
        OracleId::UnitCircleSn2,
        &circle_pts,
    )?);
    reports.push(oracle_check(
        "oracle_d1_boundary_sn4",
        OracleId::D1BoundarySn4,
        &circle_pts,
    )?);

    // Landen recursion on real m
    let mut landen_pts = Vec::new();
    for i in 1..=9 {
        for &u in &u_grid {
            landen_pts.push((u, c(i as f64 / 10.0, 0.0)));
        }
    }
    reports.push(oracle_check(
        "oracle_landen_recursion",
        OracleId::LandenRecursion,
        &landen_pts,
    )?);

    // Fourier forms: real m plus complex samples inside the nome guard
    let mut fourier_pts = Vec::new();
    for &m in &[
        c(0.1, 0.0),
        c(0.3, 0.0),
        c(0.5, 0.0),
        c(0.7, 0.0),
        c(0.9, 0.0),
        c(0.3, 0.4),
        c(0.5, -0.2),
        c(-0.4, 0.3),
    ] {
        for &u in &[-0.6, 0.3, 0.7, 1.2] {
            fourier_pts.push((u, m));
        }
    }
    reports.push(oracle_check(
        "oracle_fourier_sc",
        OracleId::FourierRatioSc,
        &fourier_pts,
    )?);
    reports.push(oracle_check(
        "oracle_fourier_nc",
        OracleId::FourierRatioNc,
        &fourier_pts,
    )?);
    reports.push(oracle_check(
        "oracle_fourier_dc",
        OracleId::FourierRatioDc,
        &fourier_pts,
    )?);

    // cut continuation on (1, 10)
    let mut cut_pts = Vec::new();
    for i in 0..20 {
        let m = 1.05 + 0.44 * i as f64;
        for &u in &u_grid {
            cut_pts.push((u, c(m, 0.0)));
        }
    }
    reports.push(oracle_check(
        "oracle_cut_continuation",
        OracleId::CutContinuation,
        &cut_pts,
    )?);

    // connection formula K(1/m) = m^{1/2} [K(m) -/+ i K'(m)] on (1, 10)
    {
        let mut max_error = 0.0f64;
        let mut samples = 0;
        for i in 0..40 {
            let m = 1.05 + (10.0 - 1.05) * i as f64 / 39.0;
            let lhs = complete_k(c(1.0 / m, 0.0))?;
            for (side, sign) in [(CutSide::Above, -1.0), (CutSide::Below, 1.0)] {
                let ctx = build_context(Parameter::with_side(c(m, 0.0), side)?)?;
                let rhs = c(m.sqrt(), 0.0) * (ctx.k + sign * I * ctx.kprime);
                max_error = max_error.max((lhs - rhs).norm());
                samples += 1;
            }
        }
        reports.push(CheckReport::thresholded(
            "connection_formula",
            samples,
            max_error,
            IDENTITY_TOL,
        ));
    }

    // unit-circle K and K' closed forms on a 100-point theta grid
    {
        let mut max_error = 0.0f64;
        for i in 1..=100 {
            let th = PI / 4.0 * i as f64 / 100.0;
            let m = (4.0 * I * th).exp();
            let kc = complete_k(c(th.cos().powi(2), 0.0))?;
            let ks = complete_k(c(th.sin().powi(2), 0.0))?;
            let e1 = (complete_k(m)? - 0.5 * (-I * th).exp() * (kc + I * ks)).norm();
            let e2 = (complete_k(ONE - m)? - (-I * th).exp() * ks).norm();
            max_error = max_error.max(e1).max(e2);
        }
        reports.push(CheckReport::thresholded(
            "unit_circle_k_formulas",
            200,
            max_error,
            IDENTITY_TOL,
        ));
    }

    // fundamental identities on quasi-random samples off the cut
    {
        let pts: Vec<(f64, Complex64)> = (0..1000)
            .map(|i| {
                let u = 0.02 + 1.96 * halton(i + 1, 2);
                let re = -4.0 + 8.0 * halton(i + 1, 3);
                let im = -4.0 + 8.0 * halton(i + 1, 5);
                (u, c(re, im))
            })
            .filter(|&(_, m)| !(m.im == 0.0 && m.re >= 1.0))
            .collect();
        let max_error = pts
            .par_iter()
            .map(|&(u, m)| {
                let t = jacobi_triple(u, &build_context(Parameter::new(m))?)?;
                let e1 = (t.s * t.s + t.c * t.c - ONE).norm();
                let e2 = (t.d * t.d + m * t.s * t.s - ONE).norm();
                Ok(e1.max(e2))
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(0.0f64, f64::max);
        reports.push(CheckReport::thresholded(
            "fundamental_identities",
            pts.len(),
            max_error,
            FUNDAMENTAL_TOL,
        ));
    }

    // conjugation symmetry of q, K and sn on sampled pairs
    {
        let mut max_error = 0.0f64;
        let mut samples = 0;
        for i in 0..200u64 {
            let re = -6.0 + 12.0 * halton(i + 1, 2);
            let im = 0.05 + 4.0 * halton(i + 1, 3);
            let a = build_context(Parameter::new(c(re, im)))?;
            let b = build_context(Parameter::new(c(re, -im)))?;
            max_error = max_error.max((a.q - b.q.conj()).norm());
            max_error = max_error.max((a.k - b.k.conj()).norm());
            let u = 0.1 + 0.8 * halton(i + 1, 5);
            let ta = jacobi_triple(u, &a)?;
            let tb = jacobi_triple(u, &b)?;
            max_error = max_error.max((ta.s - tb.s.conj()).norm());
            samples += 1;
        }
        reports.push(CheckReport::thresholded(
            "conjugation_symmetry",
            samples,
            max_error,
            CONJUGATION_TOL,
        ));
    }

    // nome stays in the unit disk over the sampled plane
    {
        let mut max_abs = 0.0f64;
        let mut samples = 0;
        let mut i = 0u64;
        while samples < 10_000 {
            i += 1;
            let re = -10.0 + 20.0 * halton(i, 2);
            let im = -10.0 + 20.0 * halton(i, 3);
            let m = c(re, im);
            if m.norm() > 10.0 || (m.im == 0.0 && m.re >= 1.0) {
                continue;
            }
            max_abs = max_abs.max(build_context(Parameter::new(m))?.q.norm());
            samples += 1;
        }
        reports.push(CheckReport::strict_bound("nome_in_disk", samples, max_abs - 1.0));
    }

    // theta truncation: a double-length brute-force sum moves nothing
    {
        let mut max_error = 0.0f64;
        let mut samples = 0;
        for &q in &[c(0.3, 0.0), c(0.45, 0.2), c(-0.5, 0.1), c(0.05, 0.7)] {
            for &x in &[0.0, 0.4, 1.1, 2.0] {
                let xx = c(x, 0.0);
                for j in 3..=4u8 {
                    let fast = theta::theta(j, xx, q)?;
                    let mut brute = ONE;
                    for n in 1..128 {
                        let nf = n as f64;
                        let sign = if j == 3 || n % 2 == 0 { 1.0 } else { -1.0 };
                        brute += 2.0 * sign * q.powf(nf * nf) * (2.0 * nf * xx).cos();
                    }
                    max_error =
                        max_error.max((fast - brute).norm() / brute.norm().max(1e-30));
                    samples += 1;
                }
            }
        }
        reports.push(CheckReport::thresholded(
            "theta_truncation",
            samples,
            max_error,
            THETA_TRUNC_TOL,
        ));
    }

    // modular identity m = theta2(0,q)^4 / theta3(0,q)^4
    {
        let mut max_error = 0.0f64;
        let mut samples = 0;
        for &m in &[c(0.5, 0.0), c(0.1, 0.0), c(0.9, 0.0), c(0.3, 0.4), c(-0.7, 0.2)] {
            let ctx = build_context(Parameter::new(m))?;
            let t2 = theta::theta(2, c(0.0, 0.0), ctx.q)?;
            let t3 = theta::theta(3, c(0.0, 0.0), ctx.q)?;
            let ratio = (t2 / t3).powi(4);
            max_error = max_error.max((ratio - m).norm());
            samples += 1;
        }
        reports.push(CheckReport::thresholded(
            "modular_nome_identity",
            samples,
            max_error,
            MODULAR_TOL,
        ));
    }

    Ok(reports)
}

// ---------------------------------------------------------------------
// asymptotics
// ---------------------------------------------------------------------

/// Offsets for the m -> 1 and m -> 0 ratio ladders. The second-order
/// correction scales like t^{1-u}, so the 5e-2 target needs the ladder to
/// reach 1e-8 for u = 0.8; monotone decrease is asserted along the whole
/// ladder.
const LADDER: [f64; 4] = [1e-2, 1e-4, 1e-6, 1e-8];

fn ladder_check(
    name: &'static str,
    ratio: impl Fn(f64, f64) -> Result<f64>,
) -> Result<CheckReport> {
    let us = [0.2, 0.5, 0.8];
    let mut final_err = 0.0f64;
    let mut monotone = true;
    for &u in &us {
        let mut errs = Vec::new();
        for &t in &LADDER {
            // the exact complement of the representable 1 - t, so the
            // prediction sees the same offset the evaluation does
            let t = 1.0 - (1.0 - t);
            errs.push((ratio(u, t)? - 1.0).abs());
        }
        for w in errs.windows(2) {
            if w[1] > w[0].max(ASYM_NOISE_FLOOR) {
                monotone = false;
            }
        }
        final_err = final_err.max(*errs.last().unwrap());
    }
    Ok(CheckReport {
        name,
        samples: us.len() * LADDER.len(),
        max_error: final_err,
        pass: monotone && final_err <= ASYM_FINAL_TOL,
    })
}

fn triple_real(u: f64, m: f64) -> Result<(f64, f64, f64)> {
    let t = jacobi_triple(u, &build_context(Parameter::from_re(m))?)?;
    Ok((t.s.re, t.c.re, t.d.re))
}

pub fn run_asymptotics() -> Result<Vec<CheckReport>> {
    let mut reports = Vec::new();

    // m -> 1 ladders of sn, cn, dn at m = 1 - t
    reports.push(ladder_check("ratio_sn_near_one", |u, t| {
        let (s, _, _) = triple_real(u, 1.0 - t)?;
        Ok((1.0 - s) / (2f64.powf(1.0 - 4.0 * u) * t.powf(u)))
    })?);
    reports.push(ladder_check("ratio_cn_near_one", |u, t| {
        let (_, cn, _) = triple_real(u, 1.0 - t)?;
        Ok(cn / (2f64.powf(1.0 - 2.0 * u) * t.powf(u / 2.0)))
    })?);
    reports.push(ladder_check("ratio_dn_near_one", |u, t| {
        let (_, _, d) = triple_real(u, 1.0 - t)?;
        Ok(d / (2f64.powf(1.0 - 2.0 * u) * t.powf(u / 2.0)))
    })?);

    // m -> 0 ladders of sc, nc, dc at argument tau K u, evaluated through
    // the imaginary transformation at the complementary parameter
    reports.push(ladder_check("ratio_sc_near_zero", |u, t| {
        let (s1, _, _) = triple_real(u, 1.0 - t)?;
        let sc = I * s1; // sc(tau K u | t) = i sn(K(1-t)u | 1-t)
        let num = I - sc;
        let den = I * 2f64.powf(1.0 - 4.0 * u) * t.powf(u);
        Ok((num / den).re)
    })?);
    reports.push(ladder_check("ratio_nc_near_zero", |u, t| {
        let (_, c1, _) = triple_real(u, 1.0 - t)?;
        Ok(c1 / (2f64.powf(1.0 - 2.0 * u) * t.powf(u / 2.0)))
    })?);
    reports.push(ladder_check("ratio_dc_near_zero", |u, t| {
        let (_, _, d1) = triple_real(u, 1.0 - t)?;
        Ok(d1 / (2f64.powf(1.0 - 2.0 * u) * t.powf(u / 2.0)))
    })?);

    // nome expansion q = m/16 + m^2/32 + O(m^3)
    {
        let m = 1e-4;
        let ctx = build_context(Parameter::from_re(m))?;
        let err = (ctx.q.re / (m / 16.0 + m * m / 32.0) - 1.0).abs();
        reports.push(CheckReport::thresholded(
            "nome_expansion",
            1,
            err,
            NOME_EXPANSION_TOL,
        ));
    }
    Ok(reports)
}

// ---------------------------------------------------------------------
// theorem1
// ---------------------------------------------------------------------

pub fn run_theorem1() -> Result<Vec<CheckReport>> {
    let mut reports = Vec::new();
    let u_all = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];

    // sigma < 1 outside D union D1, |m| <= 50, plus the real ray [2, 50]
    {
        let mut pts = Vec::new();
        let mut i = 0u64;
        while pts.len() < 10_000 {
            i += 1;
            let m = c(-50.0 + 100.0 * halton(i, 2), -50.0 + 100.0 * halton(i, 3));
            if m.norm() > 50.0 || m.norm() <= 1.0 || (m - ONE).norm() <= 1.0 {
                continue;
            }
            if m.im == 0.0 && m.re >= 1.0 {
                continue;
            }
            pts.push(m);
        }
        for j in 0..100 {
            pts.push(c(2.0 + 48.0 * j as f64 / 99.0, 0.0));
        }
        let worst = u_all
            .par_iter()
            .map(|&u| {
                let mut w = f64::NEG_INFINITY;
                for &m in &pts {
                    w = w.max(sigma(u, &Parameter::new(m))?.sigma);
                }
                Ok(w)
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(f64::NEG_INFINITY, f64::max);
        reports.push(CheckReport::strict_bound(
            "bound_outside_region",
            pts.len() * u_all.len(),
            worst - 1.0,
        ));
    }

    // u <= 1/2: sigma < 1 on the lens grid except sigma(u, 1) = 1
    {
        let mut pts = Vec::new();
        let step = 0.02;
        let n = (2.0 / step) as i64;
        for jx in 0..=n {
            for jy in -n / 2..=n / 2 {
                let m = c(jx as f64 * step, jy as f64 * step);
                if m.norm() > 1.0 && (m - ONE).norm() < 1.0 && m != ONE {
                    pts.push(m);
                }
            }
        }
        let us = [0.1, 0.2, 0.3, 0.4, 0.5];
        let worst = us
            .par_iter()
            .map(|&u| {
                let mut w = f64::NEG_INFINITY;
                for &m in &pts {
                    w = w.max(sigma(u, &Parameter::new(m))?.sigma);
                }
                // the limit point itself is exactly 1
                if sigma(u, &Parameter::from_re(1.0))?.sigma != 1.0 {
                    w = w.max(2.0);
                }
                Ok(w)
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(f64::NEG_INFINITY, f64::max);
        reports.push(CheckReport::strict_bound(
            "bound_lens_low_u",
            pts.len() * us.len(),
            worst - 1.0,
        ));
    }

    // cut maxima: exact limit point for u <= 1/2
    {
        let mut max_error = 0.0f64;
        for &u in &[0.2, 0.4, 0.5] {
            let r = max_on_cut(u)?;
            max_error = max_error.max((r.location - 1.0).abs() + (r.value - 1.0).abs());
        }
        reports.push(CheckReport::thresholded("cut_max_low_u", 3, max_error, 0.0));
    }

    // cut maxima for u > 1/2: inside (1, m-tilde) subset of (1, 2), value > 1
    {
        let mut margin = f64::NEG_INFINITY;
        for &u in &[0.6, 0.7, 0.8, 0.9] {
            let mt = m_tilde(u)?;
            let r = max_on_cut(u)?;
            let ok = r.value > 1.0
                && r.location > 1.0
                && r.location < mt.location
                && mt.location < 2.0
                && r.unimodal;
            // margin: how far from violating any of the constraints
            let this = (1.0 - r.value)
                .max(1.0 - r.location)
                .max(r.location - mt.location)
                .max(mt.location - 2.0);
            margin = margin.max(this);
            if !ok {
                margin = margin.max(1.0);
            }
        }
        reports.push(CheckReport::strict_bound("cut_max_high_u", 4, margin));
    }

    // global maximum against the reported location and value
    {
        let g = global_max(0.55, 0.85, 0.005, 1e-8)?;
        let e = ((g.u_star - 0.69098).abs() / GLOBAL_MAX_UM_TOL)
            .max((g.m_star - 1.11015).abs() / GLOBAL_MAX_UM_TOL)
            .max((g.sigma_star - 1.01038).abs() / GLOBAL_MAX_SIGMA_TOL);
        reports.push(CheckReport::thresholded("global_maximum", 1, e, 1.0));
    }

    // auxiliary inequality 4 dn^2 (1+cn) - sn^2 (1-cn) > 0 on
    // (0, 2K) x [0, 1/2]
    {
        let mut min_val = f64::INFINITY;
        for jm in 0..50 {
            let m = 0.5 * jm as f64 / 49.0;
            let ctx = build_context(Parameter::from_re(m))?;
            for jx in 1..=200 {
                let u = 2.0 * jx as f64 / 201.0;
                let t = jacobi_triple(u, &ctx)?;
                let (s, cn, d) = (t.s.re, t.c.re, t.d.re);
                min_val = min_val.min(4.0 * d * d * (1.0 + cn) - s * s * (1.0 - cn));
            }
        }
        reports.push(CheckReport::strict_bound("aux_inequality_positivity", 200 * 50, -min_val));
    }

    // phi monotone in mu for each u
    {
        let mut worst = f64::NEG_INFINITY;
        let mut samples = 0;
        for &u in &u_all {
            let mut prev = f64::NEG_INFINITY;
            for j in 1..=50 {
                let mu = j as f64 / 51.0;
                let v = phi(u, mu)?;
                if prev != f64::NEG_INFINITY {
                    worst = worst.max(prev - v);
                }
                prev = v;
                samples += 1;
            }
        }
        reports.push(CheckReport::strict_bound("phi_monotonicity", samples, worst));
    }

    // d/dmu dc(K(mu)u|mu) = -s z / (2 mu c^2) against central differences
    {
        let h = 1e-5;
        let mut max_error = 0.0f64;
        let mut samples = 0;
        for &u in &[0.2, 0.4, 0.6, 0.8] {
            for &mu in &[0.2, 0.4, 0.6, 0.8] {
                let dc = |p: f64| -> Result<f64> {
                    Ok(jacobi_ratio(RatioKind::Dc, u, &build_context(Parameter::from_re(p))?)?.re)
                };
                let fd = (dc(mu + h)? - dc(mu - h)?) / (2.0 * h);
                let ctx = build_context(Parameter::from_re(mu))?;
                let t = jacobi_triple(u, &ctx)?;
                let z = jacobi_zeta(u, &ctx)?;
                let formula = -t.s.re * z / (2.0 * mu * t.c.re * t.c.re);
                max_error = max_error.max((fd - formula).abs());
                samples += 1;
            }
        }
        reports.push(CheckReport::thresholded(
            "dc_parameter_derivative",
            samples,
            max_error,
            DC_DERIVATIVE_TOL,
        ));
    }

    // sigma(u, m-tilde(u)) = 1: at the root the correction factor vanishes
    {
        let mut max_error = 0.0f64;
        let mut samples = 0;
        for j in 0..9 {
            let u = 0.55 + 0.04 * j as f64;
            let mt = m_tilde(u)?.location;
            max_error = max_error.max((cut_sigma_sq(u, mt)?.sqrt() - 1.0).abs());
            samples += 1;
        }
        reports.push(CheckReport::thresholded(
            "mtilde_sigma_level",
            samples,
            max_error,
            MTILDE_LEVEL_TOL,
        ));
    }

    // the two rewritten cut formulas agree with the direct one on (1, 2)
    {
        let mut max_error = 0.0f64;
        let mut samples = 0;
        for &u in &[0.55, 0.7, 0.85] {
            for j in 0..30 {
                let m = 1.02 + 0.96 * j as f64 / 29.0;
                let mu = 1.0 / m;
                let (s, cn, d) = triple_real(u, mu)?;
                let (s1, c1, d1) = triple_real(u, 1.0 - mu)?;
                let direct = cut_sigma_sq(u, m)?;
                let ph = phi(u, mu)?;
                let via_phi =
                    1.0 - cn * cn * c1 * c1 / (1.0 - d * d * s1 * s1) * (1.0 - ph);
                let sc2 = (s1 / c1) * (s1 / c1);
                let dc2 = (d / cn) * (d / cn);
                let sc2m = (s / cn) * (s / cn);
                let dc2m = (d1 / c1) * (d1 / c1);
                let via_remark = 1.0 + (mu * sc2 - dc2) / (1.0 + sc2m * dc2m);
                max_error = max_error.max((via_phi - direct).abs());
                max_error = max_error.max((via_remark - direct).abs());
                samples += 1;
            }
        }
        reports.push(CheckReport::thresholded(
            "cut_alternative_formulas",
            samples,
            max_error,
            IDENTITY_TOL,
        ));
    }

    // decay on rays: |sn| |m|^{(1-u)/2} stays under the asymptotic scale
    {
        let mut worst = f64::NEG_INFINITY;
        let mut samples = 0;
        for &u in &[0.3, 0.5, 0.7] {
            for &r in &[1e2, 1e3, 1e4] {
                let m = r * (I * PI / 3.0).exp();
                let val = sigma(u, &Parameter::new(m))?.sigma * r.powf((1.0 - u) / 2.0);
                let scale = 2f64.powf(2.0 * u - 1.0);
                worst = worst.max(val / scale - 1.25);
                samples += 1;
            }
        }
        reports.push(CheckReport::strict_bound("decay_on_rays", samples, worst));
    }

    Ok(reports)
}

// ---------------------------------------------------------------------
// spectral
// ---------------------------------------------------------------------

pub fn run_spectral() -> Result<Vec<CheckReport>> {
    let mut reports = Vec::new();
    let m_half = Parameter::from_re(0.5);
    let k_quarter = build_context(Parameter::from_re(0.25))?.k.re;

    // segment quadrature basics at m = 1/2
    {
        let ctx = build_context(m_half)?;
        let two_k = 2.0 * ctx.k;
        let rule = QuadratureRule::gauss_legendre(16, 2)?;
        let const_one = crate::spectral::integrate_segment(&|_| Ok(ONE), &m_half, &rule)?;
        let e1 = (const_one - two_k).norm() / two_k.norm();
        let e2 = cd_integral(CdKind::C, 0, c(0.0, 0.0), &m_half)?.norm();
        let e3 = (cd_integral(CdKind::D, 0, c(0.0, 0.0), &m_half)? - c(PI, 0.0)).norm();
        reports.push(CheckReport::thresholded("segment_const_length", 1, e1, 1e-12));
        reports.push(CheckReport::thresholded("segment_cn_vanishes", 1, e2, 1e-12));
        reports.push(CheckReport::thresholded("segment_dn_is_pi", 1, e3, 1e-10));
    }

    // interior residual rows at (k, z) = (0.5, 0.7 + 0.2i)
    {
        let (rows, rhs) = jacobi_residual(c(0.5, 0.0), c(0.7, 0.2), 14)?;
        let mut max_error = (rows[0] - rhs).norm();
        for r in rows.iter().skip(1) {
            max_error = max_error.max(r.norm());
        }
        reports.push(CheckReport::thresholded(
            "residual_interior_rows",
            rows.len(),
            max_error,
            RESIDUAL_TOL,
        ));
    }

    // z on the eigenvalue lattice: rhs vanishes and v is an eigenvector
    {
        let z = c(PI / (2.0 * k_quarter), 0.0);
        let (rows, rhs) = jacobi_residual(c(0.5, 0.0), z, 10)?;
        let max_error = rhs.norm().max(rows[0].norm());
        reports.push(CheckReport::thresholded(
            "residual_eigenvector",
            rows.len(),
            max_error,
            RESIDUAL_TOL,
        ));
    }

    // doubling fixed panels shrinks the residual by >= 10x until the floor
    {
        let k = c(0.5, 0.0);
        let z = c(0.7, 0.2);
        let m = Parameter::new(k * k);
        let ctx = build_context(m)?;
        let two_k = 2.0 * ctx.k;
        let pref = (I * ctx.k * z).exp();
        let n_max = 8usize;
        let residual_at = |panels: usize| -> Result<f64> {
            let rule = QuadratureRule::gauss_legendre(8, panels)?;
            let mut v = Vec::with_capacity(n_max);
            for n in 1..=n_max {
                let l = (n - 1) / 2;
                let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
                let kl = k.powi(l as i32);
                let w = I * z;
                let lpow = if n % 2 == 1 { 2 * l } else { 2 * l + 1 };
                let kind = if n % 2 == 1 { CdKind::C } else { CdKind::D };
                let f = |t: Complex64| -> Result<Complex64> {
                    let x = PI * t / two_k;
                    let (s, cn, d) = triple_at_x(x, &ctx)?;
                    let g = match kind {
                        CdKind::C => cn,
                        CdKind::D => d,
                    };
                    Ok((-w * t).exp() * g * s.powi(lpow as i32))
                };
                let integral = integrate_segment_fixed(&f, &m, &rule)?;
                let entry = if n % 2 == 1 {
                    I * sign * kl * pref * integral
                } else {
                    -sign * kl * pref * integral
                };
                v.push(entry);
            }
            let mut worst = 0.0f64;
            for n in 2..n_max {
                let w_prev = if (n - 1) % 2 == 0 { k * (n - 1) as f64 } else { c((n - 1) as f64, 0.0) };
                let w_next = if n % 2 == 0 { k * n as f64 } else { c(n as f64, 0.0) };
                worst = worst.max((w_prev * v[n - 2] + w_next * v[n] - z * v[n - 1]).norm());
            }
            Ok(worst)
        };
        let mut prev = residual_at(1)?;
        let mut ok = true;
        let mut worst_ratio = 0.0f64;
        for p in [2usize, 4, 8, 16] {
            let cur = residual_at(p)?;
            if prev > 1e-12 {
                let ratio = cur / prev;
                worst_ratio = worst_ratio.max(ratio);
                if ratio > 0.1 && cur > 1e-12 {
                    ok = false;
                }
            }
            prev = cur;
        }
        reports.push(CheckReport {
            name: "residual_panel_decay",
            samples: 5,
            max_error: worst_ratio,
            pass: ok,
        });
    }

    // truncated-matrix eigenvalues against the lattice +/- pi/(2K), +/- 3pi/(2K)
    {
        let eig = truncated_eigenvalues(0.5, 80)?;
        let mut max_error = 0.0f64;
        for j in [-3.0f64, -1.0, 1.0, 3.0] {
            let target = c(j * PI / (2.0 * k_quarter), 0.0);
            let best = eig
                .iter()
                .map(|e| (e - target).norm())
                .fold(f64::INFINITY, f64::min);
            max_error = max_error.max(best);
        }
        reports.push(CheckReport::thresholded(
            "eigenvalue_lattice",
            4,
            max_error,
            EIGENVALUE_TOL,
        ));
    }

    // C_l and D_l asymptotics at m = 1/2, z = 1 over the l-doubling ladder
    {
        let ctx = build_context(m_half)?;
        let k_half = ctx.k;
        let z = ONE;
        let ls = [16u32, 32, 64, 128];
        let mut d_errs = Vec::new();
        let mut c_errs = Vec::new();
        for &l in &ls {
            let lf = l as f64;
            let d = cd_integral(CdKind::D, l, z, &m_half)?;
            let d_pred = (2.0 * PI).sqrt() / (k_half * z).exp() * lf.powf(-0.5);
            d_errs.push((d / d_pred - ONE).norm());
            let cv = cd_integral(CdKind::C, l, z, &m_half)?;
            let c_pred = (2.0 * PI).sqrt() * z / ((ONE - c(0.5, 0.0)) * (k_half * z).exp())
                * lf.powf(-1.5);
            c_errs.push((cv / c_pred - ONE).norm());
        }
        let d_ok = d_errs.windows(2).all(|w| w[1] < w[0])
            && *d_errs.last().unwrap() <= LAPLACE_FINAL_TOL;
        let c_ok = c_errs.windows(2).all(|w| w[1] < w[0])
            && *c_errs.last().unwrap() <= LAPLACE_FINAL_TOL;
        reports.push(CheckReport {
            name: "dl_asymptotic_ratio",
            samples: ls.len(),
            max_error: *d_errs.last().unwrap(),
            pass: d_ok,
        });
        reports.push(CheckReport {
            name: "cl_asymptotic_ratio",
            samples: ls.len(),
            max_error: *c_errs.last().unwrap(),
            pass: c_ok,
        });
    }

    // saddle-point leading terms for the two closed-form test functions
    {
        let ls = [16u32, 32, 64, 128];
        for (name, f_id) in [
            ("saddle_const_one", SaddleFn::ConstOne),
            ("saddle_square_about_k", SaddleFn::SquareAboutK),
        ] {
            let ratios = saddle_check(f_id, &m_half, &ls)?;
            let errs: Vec<f64> = ratios.iter().map(|(_, r)| (r - ONE).norm()).collect();
            let ok = errs.windows(2).all(|w| w[1] < w[0])
                && *errs.last().unwrap() <= LAPLACE_FINAL_TOL;
            reports.push(CheckReport {
                name,
                samples: ls.len(),
                max_error: *errs.last().unwrap(),
                pass: ok,
            });
        }
        // prediction scales by (1-m)^{-1/2} across parameters
        let a = saddle_check(SaddleFn::ConstOne, &Parameter::from_re(0.25), &[128])?;
        let b = saddle_check(SaddleFn::ConstOne, &m_half, &[128])?;
        let rr = (a[0].1 / b[0].1 - ONE).norm();
        reports.push(CheckReport::thresholded("saddle_parameter_scaling", 2, rr, 0.05));
    }

    // geometric decay envelope of the v-sequence at |k| = 0.8
    {
        let vs = v_sequence(c(0.3, 0.1), c(0.8, 0.0), 41)?;
        let mut worst = f64::NEG_INFINITY;
        let mut samples = 0;
        for l in 1..=20usize {
            let v_odd = vs.entries[2 * l].norm(); // v_{2l+1}
            let env = 0.8f64.powi(l as i32) * (l as f64).powf(-1.5);
            worst = worst.max(v_odd / env - 1.0);
            samples += 1;
        }
        reports.push(CheckReport::strict_bound("v_decay_envelope", samples, worst));
    }

    // the sigma bound feeding the saddle analysis: max_t |sn(t|m)| on the
    // segment is 1, attained at t = K(m)
    {
        let mut max_error = 0.0f64;
        let mut samples = 0;
        for &m in &[c(0.5, 0.0), c(0.3, 0.4), c(-0.6, 0.0), (I * PI / 3.0).exp()] {
            let ctx = build_context(Parameter::new(m))?;
            let mut best = (f64::NEG_INFINITY, 0.0);
            for j in 0..=400 {
                let u = 2.0 * j as f64 / 400.0;
                let t = jacobi_triple(u, &ctx)?;
                if t.s.norm() > best.0 {
                    best = (t.s.norm(), u);
                }
                samples += 1;
            }
            // peak value 1 at u = 1, no grid point above 1
            max_error = max_error.max((best.0 - 1.0).abs().max((best.1 - 1.0).abs()));
        }
        reports.push(CheckReport::thresholded("segment_sn_bound", samples, max_error, 1e-10));
    }

    Ok(reports)
}

/// Every suite, concatenated.
pub fn run_all() -> Result<Vec<CheckReport>> {
    let mut reports = run_identities()?;
    reports.extend(run_theorem1()?);
    reports.extend(run_asymptotics()?);
    reports.extend(run_spectral()?);
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn halton_is_in_unit_interval() {
        for i in 1..100 {
            for base in [2, 3, 5] {
                let v = halton(i, base);
                assert!((0.0..1.0).contains(&v));
            }
        }
    }

    #[test]
    fn identities_suite_passes() {
        let reports = run_identities().unwrap();
        for r in &reports {
            assert!(r.pass, "{}: max_error = {:e}", r.name, r.max_error);
        }
    }

    #[test]
    fn asymptotics_suite_passes() {
        let reports = run_asymptotics().unwrap();
        for r in &reports {
            assert!(r.pass, "{}: max_error = {:e}", r.name, r.max_error);
        }
    }

    #[test]
    fn spectral_suite_passes() {
        let reports = run_spectral().unwrap();
        for r in &reports {
            assert!(r.pass, "{}: max_error = {:e}", r.name, r.max_error);
        }
    }

    #[test]
    fn theorem1_suite_passes() {
        let reports = run_theorem1().unwrap();
        for r in &reports {
            assert!(r.pass, "{}: max_error = {:e}", r.name, r.max_error);
        }
    }
}

