//! Extremal machinery for sigma(u, .): the level function phi, its root
//! m-tilde, maxima on the cut, the global maximum, and sigma = 1 region
//! contours.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::elliptic::build_context;
use crate::error::{Error, Result};
use crate::jacobi::{cut_sigma_sq, jacobi_ratio, sigma, RatioKind};
use crate::param::Parameter;

/// Bisection tolerance in mu for the m-tilde root.
pub const MTILDE_TOL: f64 = 1e-12;
/// Maximizer tolerance in m for the cut maximum.
pub const CUT_MAX_TOL: f64 = 1e-10;
/// Offset from interval endpoints: m = 1 is a limit point and m-tilde is a
/// level crossing; both are excluded analytically.
const ENDPOINT_EPS: f64 = 1e-9;
/// Sample count for the unimodality cross-check of the cut maximizer.
const UNIMODAL_SAMPLES: usize = 1000;

/// A located maximum or root on the real axis, with convergence metadata.
#[derive(Debug, Clone, Copy)]
pub struct ExtremalResult {
    pub u: f64,
    /// m* or m-tilde.
    pub location: f64,
    /// sigma at the location for maxima; the level residual phi - 1 for
    /// roots.
    pub value: f64,
    pub iterations: u32,
    pub converged: bool,
    /// The 10^3-point scan saw exactly one interior local maximum. Roots
    /// report true. The maximum is believed unique but this is numerical
    /// evidence, not a theorem, so multi-modality is reported, not assumed.
    pub unimodal: bool,
}

/// phi(u, mu) = dc^2(K(mu1)u | mu1) - dc^2(K(mu)u | mu), mu1 = 1 - mu.
///
/// Strictly increasing in mu on (0,1), zero at mu = 1/2, with limit
/// tan^2(pi u/2) as mu -> 1-. Its level phi = 1 locates the real point
/// where sigma crosses 1 on the cut (m-tilde = 1/mu-tilde).
pub fn phi(u: f64, mu: f64) -> Result<f64> {
    if !(0.0 < u && u < 1.0) {
        return Err(Error::Domain(format!("phi: u = {u} outside (0, 1)")));
    }
    if !(0.0 < mu && mu < 1.0) {
        return Err(Error::Domain(format!("phi: mu = {mu} outside (0, 1)")));
    }
    let dc = |p: f64| -> Result<f64> {
        let ctx = build_context(Parameter::from_re(p))?;
        Ok(jacobi_ratio(RatioKind::Dc, u, &ctx)?.re)
    };
    let a = dc(1.0 - mu)?;
    let b = dc(mu)?;
    Ok(a * a - b * b)
}

/// The unique root of phi(u, .) = 1 for u in (1/2, 1), reported as
/// m-tilde = 1/mu-tilde in (1, 2). Plain bisection: phi is monotone, so
/// bracketing on [1/2, 1) is guaranteed.
pub fn m_tilde(u: f64) -> Result<ExtremalResult> {
    if !(0.5 < u && u < 1.0) {
        return Err(Error::NoRoot(format!(
            "phi(u, .) stays below 1 for u = {u} <= 1/2; no crossing exists"
        )));
    }
    let mut lo = 0.5;
    let mut hi = 1.0 - ENDPOINT_EPS;
    if phi(u, hi)? <= 1.0 {
        return Err(Error::NoRoot(format!(
            "phi(u, 1-) = tan^2(pi u/2) did not exceed 1 at u = {u}"
        )));
    }
    let mut iterations = 0;
    while hi - lo > MTILDE_TOL {
        let mid = 0.5 * (lo + hi);
        if phi(u, mid)? < 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    let mu = 0.5 * (lo + hi);
    Ok(ExtremalResult {
        u,
        location: 1.0 / mu,
        value: phi(u, mu)? - 1.0,
        iterations,
        converged: true,
        unimodal: true,
    })
}

fn sigma_on_cut(u: f64, m: f64) -> Result<f64> {
    Ok(cut_sigma_sq(u, m)?.sqrt())
}

/// Golden-section maximization of f on [a, b] to interval width `tol`,
/// followed by successive parabolic refinement. Returns (x, f(x), evals).
fn maximize_1d(
    f: &dyn Fn(f64) -> Result<f64>,
    mut a: f64,
    mut b: f64,
    tol: f64,
) -> Result<(f64, f64, u32)> {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut evals = 0u32;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    evals += 2;
    while b - a > tol.max(1e-14) {
        if f1 > f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2)?;
        }
        evals += 1;
        if b - a <= 100.0 * tol {
            break;
        }
    }
    // parabolic polish on the best bracket
    let (mut x0, mut fx0) = if f1 > f2 { (x1, f1) } else { (x2, f2) };
    let mut h = (b - a).max(tol);
    for _ in 0..60 {
        let xl = (x0 - h).max(a);
        let xr = (x0 + h).min(b);
        let fl = f(xl)?;
        let fr = f(xr)?;
        evals += 2;
        // vertex of the parabola through (xl, fl), (x0, fx0), (xr, fr)
        let denom = (xl - x0) * (fx0 - fr) - (x0 - xr) * (fl - fx0);
        let step = if denom.abs() > 0.0 {
            0.5 * ((xl - x0).powi(2) * (fx0 - fr) + (x0 - xr).powi(2) * (fl - fx0)) / denom
        } else {
            0.0
        };
        let cand = (x0 - step).clamp(a, b);
        let fc = f(cand)?;
        evals += 1;
        let (best_x, best_f) = [(cand, fc), (xl, fl), (xr, fr), (x0, fx0)]
            .into_iter()
            .fold((x0, f64::NEG_INFINITY), |acc, it| if it.1 > acc.1 { it } else { acc });
        let moved = (best_x - x0).abs();
        x0 = best_x;
        fx0 = best_f;
        h = (h * 0.5).max(tol * 0.25);
        if moved < tol && h <= tol {
            break;
        }
    }
    Ok((x0, fx0, evals))
}

fn cut_max_core(u: f64, mt: f64) -> Result<(f64, f64, u32)> {
    let f = |m: f64| sigma_on_cut(u, m);
    maximize_1d(&f, 1.0 + ENDPOINT_EPS, mt - ENDPOINT_EPS, CUT_MAX_TOL)
}

/// Maximum of sigma(u, .) on the cut.
///
/// For u in (1/2, 1) the maximum sits in (1, m-tilde) and exceeds 1; it is
/// located by golden section plus parabolic refinement, with a 10^3-point
/// scan confirming unimodality. For u in (0, 1/2] the supremum is the
/// limit point (1, 1).
pub fn max_on_cut(u: f64) -> Result<ExtremalResult> {
    if !(0.0 < u && u < 1.0) {
        return Err(Error::Domain(format!("max_on_cut: u = {u} outside (0, 1)")));
    }
    if u <= 0.5 {
        return Ok(ExtremalResult {
            u,
            location: 1.0,
            value: 1.0,
            iterations: 0,
            converged: true,
            unimodal: true,
        });
    }
    let mt = m_tilde(u)?.location;
    let (loc, val, iterations) = cut_max_core(u, mt)?;

    // scan for competing interior maxima
    let lo = 1.0 + ENDPOINT_EPS;
    let hi = mt - ENDPOINT_EPS;
    let step = (hi - lo) / (UNIMODAL_SAMPLES as f64 - 1.0);
    let vals: Vec<f64> = (0..UNIMODAL_SAMPLES)
        .into_par_iter()
        .map(|i| sigma_on_cut(u, lo + step * i as f64).unwrap_or(f64::NAN))
        .collect();
    let mut peaks = 0usize;
    for i in 1..UNIMODAL_SAMPLES - 1 {
        if vals[i] > vals[i - 1] && vals[i] > vals[i + 1] {
            peaks += 1;
        }
    }
    Ok(ExtremalResult {
        u,
        location: loc,
        value: val,
        iterations,
        converged: true,
        unimodal: peaks <= 1,
    })
}

/// The located global maximum of sigma over u x m.
#[derive(Debug, Clone, Copy)]
pub struct GlobalMax {
    pub u_star: f64,
    pub m_star: f64,
    pub sigma_star: f64,
    pub iterations: u32,
}

/// Global maximum of sigma(u, m) over the given u-grid.
///
/// The global maximum over all of C lies on the real interval (1, 2) for
/// u in (1/2, 1), so the search is a coarse scan of the cut maxima over
/// the u-grid followed by alternating 1-D refinement in u and m until
/// both steps fall below `refine`. A grid confined to u <= 1/2 reports the
/// limit value (1, 1).
pub fn global_max(u_min: f64, u_max: f64, u_step: f64, refine: f64) -> Result<GlobalMax> {
    if !(0.0 < u_min && u_min < u_max && u_max < 1.0) {
        return Err(Error::Domain(format!(
            "global_max: grid [{u_min}, {u_max}] not inside (0, 1)"
        )));
    }
    if u_step <= 0.0 || refine <= 0.0 {
        return Err(Error::Domain("global_max: step and refine must be > 0".into()));
    }
    let n = ((u_max - u_min) / u_step).floor() as usize + 1;
    let coarse: Vec<(f64, f64, f64)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let u = u_min + u_step * i as f64;
            if u <= 0.5 {
                Ok((u, 1.0, 1.0))
            } else {
                let mt = m_tilde(u)?.location;
                let (m, v, _) = cut_max_core(u, mt)?;
                Ok((u, m, v))
            }
        })
        .collect::<Result<_>>()?;
    let &(mut u0, mut m0, mut s0) = coarse
        .iter()
        .max_by(|a, b| a.2.total_cmp(&b.2))
        .expect("nonempty grid");
    if s0 <= 1.0 {
        // entire grid below the crossing: the supremum is the limit (1, 1)
        return Ok(GlobalMax { u_star: u0, m_star: 1.0, sigma_star: 1.0, iterations: 0 });
    }

    let mut iterations = 0u32;
    let mut du = u_step;
    for _ in 0..200 {
        // refine m at fixed u
        let mt = m_tilde(u0)?.location;
        let (m_new, _, _) = cut_max_core(u0, mt)?;
        let dm_step = (m_new - m0).abs();
        m0 = m_new;
        // refine u at fixed m
        let lo = (u0 - du).max(0.5 + ENDPOINT_EPS);
        let hi = (u0 + du).min(1.0 - ENDPOINT_EPS);
        let f = |u: f64| sigma_on_cut(u, m0);
        let (u_new, _, _) = maximize_1d(&f, lo, hi, refine.min(CUT_MAX_TOL))?;
        let du_step = (u_new - u0).abs();
        u0 = u_new;
        du = (du * 0.5).max(10.0 * refine);
        iterations += 1;
        if dm_step < refine && du_step < refine {
            break;
        }
    }
    // report sigma recomputed at the final point
    s0 = sigma_on_cut(u0, m0)?;
    Ok(GlobalMax { u_star: u0, m_star: m0, sigma_star: s0, iterations })
}

/// Rectangle in the m-plane.
#[derive(Debug, Clone, Copy)]
pub struct Window {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

/// One polyline of the sigma = 1 level set.
#[derive(Debug, Clone)]
pub struct ContourPolyline {
    pub points: Vec<Complex64>,
    pub closed: bool,
}

/// sigma sampled over a rectangle of the m-plane plus the extracted
/// sigma = 1 level set.
#[derive(Debug, Clone)]
pub struct RegionGrid {
    pub u: f64,
    pub window: Window,
    pub step: f64,
    pub nx: usize,
    pub ny: usize,
    /// Row-major, index j * nx + i for the node (x0 + i h, y0 + j h).
    pub values: Vec<f64>,
    pub contours: Vec<ContourPolyline>,
}

impl RegionGrid {
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.nx + i]
    }

    pub fn node(&self, i: usize, j: usize) -> Complex64 {
        Complex64::new(
            self.window.x0 + self.step * i as f64,
            self.window.y0 + self.step * j as f64,
        )
    }
}

/// Scan sigma(u, .) over a grid and extract the sigma = 1 contour by
/// marching squares with linear edge interpolation. Cut cells take the cut
/// formula through `sigma` (side-independent there); polylines are closed
/// where the level set is closed.
pub fn region_scan(u: f64, window: Window, step: f64) -> Result<RegionGrid> {
    if !(0.0 < u && u < 1.0) {
        return Err(Error::Domain(format!("region_scan: u = {u} outside (0, 1)")));
    }
    if step <= 0.0 || window.x1 <= window.x0 || window.y1 <= window.y0 {
        return Err(Error::Domain("region_scan: degenerate window or step".into()));
    }
    let nx = ((window.x1 - window.x0) / step).round() as usize + 1;
    let ny = ((window.y1 - window.y0) / step).round() as usize + 1;
    let values: Vec<f64> = (0..nx * ny)
        .into_par_iter()
        .map(|idx| {
            let i = idx % nx;
            let j = idx / nx;
            let m = Complex64::new(
                window.x0 + step * i as f64,
                window.y0 + step * j as f64,
            );
            sigma(u, &Parameter::new(m)).map(|s| s.sigma)
        })
        .collect::<Result<_>>()?;
    let grid = RegionGrid { u, window, step, nx, ny, values, contours: Vec::new() };
    let contours = march_level_one(&grid);
    Ok(RegionGrid { contours, ..grid })
}

/// Grid-edge identifier: the edge from node (i, j) toward +x (horizontal)
/// or +y (vertical). Interpolated crossings live on edges, so chaining by
/// edge key is exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct EdgeKey {
    i: usize,
    j: usize,
    vertical: bool,
}

fn march_level_one(grid: &RegionGrid) -> Vec<ContourPolyline> {
    const LEVEL: f64 = 1.0;
    let mut segments: Vec<(EdgeKey, EdgeKey)> = Vec::new();
    for j in 0..grid.ny - 1 {
        for i in 0..grid.nx - 1 {
            let v00 = grid.value(i, j);
            let v10 = grid.value(i + 1, j);
            let v01 = grid.value(i, j + 1);
            let v11 = grid.value(i + 1, j + 1);
            let mut code = 0u8;
            if v00 > LEVEL {
                code |= 1;
            }
            if v10 > LEVEL {
                code |= 2;
            }
            if v11 > LEVEL {
                code |= 4;
            }
            if v01 > LEVEL {
                code |= 8;
            }
            let bottom = EdgeKey { i, j, vertical: false };
            let top = EdgeKey { i, j: j + 1, vertical: false };
            let left = EdgeKey { i, j, vertical: true };
            let right = EdgeKey { i: i + 1, j, vertical: true };
            match code {
                0 | 15 => {}
                1 | 14 => segments.push((bottom, left)),
                2 | 13 => segments.push((bottom, right)),
                3 | 12 => segments.push((left, right)),
                4 | 11 => segments.push((top, right)),
                6 | 9 => segments.push((bottom, top)),
                7 | 8 => segments.push((top, left)),
                5 | 10 => {
                    // saddle: split by the center average
                    let center = 0.25 * (v00 + v10 + v01 + v11);
                    let center_inside = center > LEVEL;
                    if (code == 5) == center_inside {
                        segments.push((bottom, right));
                        segments.push((top, left));
                    } else {
                        segments.push((bottom, left));
                        segments.push((top, right));
                    }
                }
                _ => unreachable!(),
            }
        }
    }
    chain_segments(grid, segments)
}

fn edge_point(grid: &RegionGrid, e: EdgeKey) -> Complex64 {
    let va = grid.value(e.i, e.j);
    let (vb, bx, by) = if e.vertical {
        (grid.value(e.i, e.j + 1), e.i, e.j + 1)
    } else {
        (grid.value(e.i + 1, e.j), e.i + 1, e.j)
    };
    let t = if (vb - va).abs() > 0.0 {
        ((1.0 - va) / (vb - va)).clamp(0.0, 1.0)
    } else {
        0.5
    };
    let a = grid.node(e.i, e.j);
    let b = grid.node(bx, by);
    a + t * (b - a)
}

fn chain_segments(grid: &RegionGrid, segments: Vec<(EdgeKey, EdgeKey)>) -> Vec<ContourPolyline> {
    use std::collections::HashMap;
    let mut adjacency: HashMap<EdgeKey, Vec<usize>> = HashMap::new();
    for (idx, (a, b)) in segments.iter().enumerate() {
        adjacency.entry(*a).or_default().push(idx);
        adjacency.entry(*b).or_default().push(idx);
    }
    let mut used = vec![false; segments.len()];
    let mut polylines = Vec::new();
    for start in 0..segments.len() {
        if used[start] {
            continue;
        }
        used[start] = true;
        let (a0, b0) = segments[start];
        let mut keys = vec![a0, b0];
        // extend forward from the tail, then backward from the head
        for dir in 0..2 {
            loop {
                let end = if dir == 0 { *keys.last().unwrap() } else { keys[0] };
                let next = adjacency
                    .get(&end)
                    .and_then(|ids| ids.iter().find(|&&id| !used[id]))
                    .copied();
                let Some(id) = next else { break };
                used[id] = true;
                let (a, b) = segments[id];
                let other = if a == end { b } else { a };
                if dir == 0 {
                    keys.push(other);
                } else {
                    keys.insert(0, other);
                }
                if keys[0] == *keys.last().unwrap() {
                    break;
                }
            }
            if keys[0] == *keys.last().unwrap() {
                break;
            }
        }
        let closed = keys.len() > 2 && keys[0] == *keys.last().unwrap();
        if closed {
            keys.pop();
        }
        let points = keys.into_iter().map(|k| edge_point(grid, k)).collect();
        polylines.push(ContourPolyline { points, closed });
    }
    polylines
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_vanishes_at_half() {
        for &u in &[0.2, 0.5, 0.6, 0.9] {
            assert!(phi(u, 0.5).unwrap().abs() < 1e-13, "phi({u}, 1/2)");
        }
    }

    #[test]
    fn phi_limit_is_tan_squared() {
        let lim = (0.3 * std::f64::consts::PI).tan().powi(2);
        let v = phi(0.6, 1.0 - 1e-6).unwrap();
        assert!((v - lim).abs() < 1e-2, "phi -> {v}, want {lim}");
    }

    #[test]
    fn phi_is_increasing() {
        assert!(phi(0.6, 0.6).unwrap() > phi(0.6, 0.55).unwrap());
    }

    #[test]
    fn m_tilde_at_barely_above_half() {
        let r = m_tilde(0.51).unwrap();
        assert!(r.converged);
        assert!(1.0 < r.location && r.location < 1.2, "m_tilde = {}", r.location);
    }

    #[test]
    fn m_tilde_residual() {
        let r = m_tilde(0.7).unwrap();
        assert!(1.0 < r.location && r.location < 2.0);
        // independent residual check
        let res = phi(0.7, 1.0 / r.location).unwrap() - 1.0;
        assert!(res.abs() < 1e-10, "phi residual = {res}");
        // frozen from the 40-digit bisection: m_tilde(0.7) = 1.4526507280765655
        assert!((r.location - 1.4526507280765655).abs() < 1e-9);
    }

    #[test]
    fn m_tilde_no_root_below_half() {
        assert!(matches!(m_tilde(0.4), Err(Error::NoRoot(_))));
    }

    #[test]
    fn cut_max_low_u_is_limit_point() {
        let r = max_on_cut(0.5).unwrap();
        assert_eq!((r.location, r.value), (1.0, 1.0));
    }

    #[test]
    fn cut_max_high_u_exceeds_one() {
        let r = max_on_cut(0.7).unwrap();
        let mt = m_tilde(0.7).unwrap().location;
        assert!(r.value > 1.0);
        assert!(1.0 < r.location && r.location < mt);
        assert!(r.unimodal);
    }

    #[test]
    fn cut_max_near_paper_point() {
        let r = max_on_cut(0.69098).unwrap();
        assert!((r.location - 1.11015).abs() < 5e-3, "m* = {}", r.location);
        assert!((r.value - 1.01038).abs() < 1e-3, "sigma* = {}", r.value);
    }

    #[test]
    fn global_max_reproduces_reported_point() {
        let g = global_max(0.55, 0.85, 0.01, 1e-8).unwrap();
        assert!((g.u_star - 0.69098).abs() < 5e-3, "u* = {}", g.u_star);
        assert!((g.m_star - 1.11015).abs() < 5e-3, "m* = {}", g.m_star);
        assert!((g.sigma_star - 1.01038).abs() < 1e-3, "sigma* = {}", g.sigma_star);
        // self-consistency
        let re = sigma_on_cut(g.u_star, g.m_star).unwrap();
        assert!((re - g.sigma_star).abs() < 1e-12);
    }

    #[test]
    fn global_max_restricted_grid_degenerates() {
        let g = global_max(0.2, 0.45, 0.05, 1e-8).unwrap();
        assert_eq!((g.m_star, g.sigma_star), (1.0, 1.0));
    }

    #[test]
    fn region_scan_low_u_has_no_contour() {
        let w = Window { x0: -0.5, x1: 2.5, y0: -1.5, y1: 1.5 };
        let g = region_scan(0.4, w, 0.05).unwrap();
        assert!(g.contours.is_empty(), "{} contours", g.contours.len());
    }

    #[test]
    fn region_scan_u07_contour_in_lens() {
        let w = Window { x0: -0.5, x1: 2.5, y0: -1.5, y1: 1.5 };
        let g = region_scan(0.7, w, 0.02).unwrap();
        assert!(!g.contours.is_empty());
        let mt = m_tilde(0.7).unwrap().location;
        let slack = 2f64.sqrt() * g.step;
        let mut saw_real_crossing = false;
        for poly in &g.contours {
            assert!(poly.closed, "level set should close inside the window");
            for p in &poly.points {
                assert!(p.norm() >= 1.0 - slack, "contour point {p} inside D");
                assert!(
                    (p - Complex64::new(1.0, 0.0)).norm() <= 1.0 + slack,
                    "contour point {p} outside D1"
                );
                if p.im.abs() <= slack && (p.re - mt).abs() <= slack {
                    saw_real_crossing = true;
                }
            }
        }
        assert!(saw_real_crossing, "contour misses the real point near m-tilde");
    }

    #[test]
    fn region_contour_is_mirror_symmetric() {
        let w = Window { x0: 0.5, x1: 2.2, y0: -0.8, y1: 0.8 };
        let g = region_scan(0.8, w, 0.02).unwrap();
        assert!(!g.contours.is_empty());
        let all: Vec<Complex64> =
            g.contours.iter().flat_map(|p| p.points.iter().copied()).collect();
        for p in &all {
            let mirrored = p.conj();
            let nearest = all
                .iter()
                .map(|q| (q - mirrored).norm())
                .fold(f64::INFINITY, f64::min);
            assert!(nearest <= 1.5 * g.step, "no mirror partner for {p}");
        }
    }
}
