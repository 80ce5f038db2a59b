use super::{polar_node, transformed, ConvexBody, Projected, Repr};
use crate::error::{arg, domain, Result};
use crate::geometry::{dot, norm, pairwise_sum, unit_ball_volume, DirectionGrid, LinearMap, Subspace, Vector};
use rayon::prelude::*;
use std::f64::consts::PI;
use std::sync::Arc;

/// Support values on every grid direction, in grid order.
pub fn support_on_grid(k: &ConvexBody, grid: &DirectionGrid) -> Vec<f64> {
    grid.directions().par_iter().map(|u| k.support(u)).collect()
}

/// K|S. Polytopes are projected vertexwise; other bodies get a formula node.
pub fn project_body(k: &ConvexBody, s: &Subspace) -> Result<ConvexBody> {
    if k.dim() != s.ambient_dim() {
        return arg("project_body: dimension mismatch");
    }
    match k.as_vpolytope() {
        Some(p) => ConvexBody::vpolytope(p.vertices().iter().map(|v| s.project(v)).collect()),
        None => Ok(ConvexBody::from_op(Arc::new(Projected { subspace: s.clone(), body: k.clone() }))),
    }
}

/// φK, with h_{φK}(x) = h_K(φᵗx).
pub fn transform_body(k: &ConvexBody, phi: &LinearMap) -> Result<ConvexBody> {
    if k.dim() != phi.dim() {
        return arg("transform_body: dimension mismatch");
    }
    Ok(match k.repr() {
        Repr::VPolytope(p) => ConvexBody::vpolytope(p.vertices().iter().map(|v| phi.apply(v)).collect())?,
        Repr::Transformed { map, inner } => transformed(phi.compose(map), inner.clone()),
        _ => transformed(phi.clone(), k.clone()),
    })
}

/// The polar body K°. Requires h_K ≥ 1e−8 on the grid (o in the interior).
/// Polytopes with n ≤ 3 are dualized exactly through their facets.
pub fn polar_body(k: &ConvexBody, grid: &Arc<DirectionGrid>) -> Result<ConvexBody> {
    if k.dim() != grid.dim() {
        return arg("polar_body: dimension mismatch");
    }
    let h = support_on_grid(k, grid);
    if let Some((i, v)) = h.iter().enumerate().find(|(_, v)| **v < 1e-8) {
        return domain(format!(
            "polar_body: origin not interior (support {v:e} in direction {:?})",
            grid.directions()[i].as_slice()
        ));
    }
    match k.repr() {
        Repr::VPolytope(p) if p.hull().is_some_and(|h| h.is_full_dim()) => {
            let facets = p.hull().unwrap().facets();
            ConvexBody::vpolytope(facets.iter().map(|f| f.normal.scale(1.0 / f.offset)).collect())
        }
        Repr::Ball { center, radius } if center.norm() == 0.0 => ConvexBody::ball(center.clone(), 1.0 / radius),
        Repr::Polar { body, .. } => Ok(body.clone()),
        _ => Ok(polar_node(k.clone(), grid.clone())),
    }
}

/// max over grid directions of |h_K(u) − h_L(u)|.
pub fn hausdorff_distance(k: &ConvexBody, l: &ConvexBody, grid: &DirectionGrid) -> Result<f64> {
    if k.dim() != grid.dim() || l.dim() != grid.dim() {
        return arg("hausdorff_distance: dimension mismatch");
    }
    Ok(grid
        .directions()
        .par_iter()
        .map(|u| (k.support(u) - l.support(u)).abs())
        .reduce(|| 0.0, f64::max))
}

/// Radial function ρ_K(u) = min over v with u·v > 0 of h_K(v)/(u·v), taken
/// over the grid and then refined locally. Exact for polytopes (n ≤ 3), balls
/// and invertible images of those.
pub fn radial_from_support(k: &ConvexBody, u: &Vector, grid: &DirectionGrid) -> Result<f64> {
    if u.dim() != k.dim() || grid.dim() != k.dim() {
        return arg("radial_from_support: dimension mismatch");
    }
    if u.norm() == 0.0 {
        return arg("radial_from_support: direction must be nonzero");
    }
    Ok(radial_of(k, u, grid))
}

pub(crate) fn radial_of(k: &ConvexBody, x: &[f64], grid: &DirectionGrid) -> f64 {
    if let Some(r) = k.radial_exact(x) {
        return r;
    }
    radial_grid(k, x, grid, None)
}

/// Grid-based radial function; `hvals` optionally caches h_K on the grid.
pub(crate) fn radial_grid(k: &ConvexBody, x: &[f64], grid: &DirectionGrid, hvals: Option<&[f64]>) -> f64 {
    let r = norm(x);
    let u: Vec<f64> = x.iter().map(|c| c / r).collect();
    // A sampled body is the intersection of its own sample half-spaces, so
    // the minimum over its grid is exact and off-grid refinement would only
    // see the piecewise-constant extension.
    let (grid, hvals, refine) = match k.repr() {
        Repr::SupportSampled { grid: own, values } => (&**own, Some(values.as_slice()), false),
        _ => (grid, hvals, true),
    };
    let h = |i: usize| match hvals {
        Some(v) => v[i],
        None => k.support(&grid.directions()[i]),
    };
    let rho = if grid.dim() == 2 && grid.len() >= 8 {
        radial_planar(k, &u, grid, &h, refine)
    } else if grid.dim() == 1 {
        let i = if u[0] > 0.0 { 0 } else { 1 };
        h(i)
    } else {
        radial_general(k, &u, grid, &h, refine)
    };
    rho.max(0.0) / r
}

/// In the plane g(v) = h(v)/(u·v) restricted to the half circle around u is
/// unimodal (it is h along the tangent line u + τw, a convex function of τ), so
/// a ternary search over grid indices finds the grid minimum; golden-section
/// search on τ then refines it.
fn radial_planar(k: &ConvexBody, u: &[f64], grid: &DirectionGrid, h: &dyn Fn(usize) -> f64, refine: bool) -> f64 {
    let m = grid.len() as i64;
    let step = 2.0 * PI / m as f64;
    let theta = u[1].atan2(u[0]);
    let k0 = (theta / step).round() as i64;
    let q = ((PI / 2.0) / step).floor() as i64 - 1;
    let idx = |j: i64| (k0 + j).rem_euclid(m) as usize;
    let g = |j: i64| {
        let i = idx(j);
        let v = &grid.directions()[i];
        h(i) / dot(u, v)
    };
    let (mut lo, mut hi) = (-q, q);
    while hi - lo > 2 {
        let m1 = lo + (hi - lo) / 3;
        let m2 = hi - (hi - lo) / 3;
        let (g1, g2) = (g(m1), g(m2));
        if g1 < g2 {
            hi = m2;
        } else if g1 > g2 {
            lo = m1;
        } else {
            lo = m1;
            hi = m2;
        }
    }
    let mut best_j = lo;
    let mut best = g(lo);
    for j in lo + 1..=hi {
        let v = g(j);
        if v < best {
            best = v;
            best_j = j;
        }
    }
    if !refine {
        return best;
    }
    // Refine on the tangent line between the neighbouring grid directions.
    let w = [-u[1], u[0]];
    let tau = |j: i64| {
        let v = &grid.directions()[idx(j)];
        dot(&w, v) / dot(u, v)
    };
    let a = tau((best_j - 1).max(-q));
    let b = tau((best_j + 1).min(q));
    let f = |t: f64| k.support(&[u[0] + t * w[0], u[1] + t * w[1]]);
    best.min(golden_min(&f, a.min(b), a.max(b)))
}

fn golden_min(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    let mut best = fc.min(fd);
    for _ in 0..80 {
        if (b - a).abs() <= 1e-14 * (1.0 + a.abs().max(b.abs())) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
        best = best.min(fc).min(fd);
    }
    best
}

/// Brute-force minimum over the grid followed by a pattern search on the
/// tangent hyperplane at u. The search only ever lowers the value, which
/// stays an upper bound of the true radial function.
fn radial_general(k: &ConvexBody, u: &[f64], grid: &DirectionGrid, h: &dyn Fn(usize) -> f64, refine: bool) -> f64 {
    let n = u.len();
    let mut best = f64::INFINITY;
    let mut best_i = None;
    for (i, v) in grid.directions().iter().enumerate() {
        let c = dot(u, v);
        if c > 1e-9 {
            let val = h(i) / c;
            if val < best {
                best = val;
                best_i = Some(i);
            }
        }
    }
    let Some(bi) = best_i else { return 0.0 };
    if !refine {
        return best;
    }
    let tangent = tangent_basis(u);
    let v = &grid.directions()[bi];
    let c = dot(u, v);
    let mut tau: Vec<f64> = tangent.iter().map(|w| dot(w, v) / c).collect();
    let point = |t: &[f64]| {
        let mut p = u.to_vec();
        for (ti, w) in t.iter().zip(&tangent) {
            for j in 0..n {
                p[j] += ti * w[j];
            }
        }
        p
    };
    let mut step = 2.0 * (crate::geometry::sphere_area(n) / grid.len() as f64).powf(1.0 / (n - 1) as f64);
    let mut iters = 0;
    while step > 1e-12 && iters < 400 {
        iters += 1;
        let mut improved = false;
        for i in 0..tau.len() {
            for s in [step, -step] {
                let mut t = tau.clone();
                t[i] += s;
                let val = k.support(&point(&t));
                if val < best {
                    best = val;
                    tau = t;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    best
}

fn tangent_basis(u: &[f64]) -> Vec<Vec<f64>> {
    let n = u.len();
    let mut basis: Vec<Vec<f64>> = vec![u.to_vec()];
    for i in 0..n {
        if basis.len() == n {
            break;
        }
        let mut r = vec![0.0; n];
        r[i] = 1.0;
        for b in &basis {
            let c = dot(&r, b);
            for j in 0..n {
                r[j] -= c * b[j];
            }
        }
        let d = norm(&r);
        if d > 1e-6 {
            basis.push(r.iter().map(|x| x / d).collect());
        }
    }
    basis.remove(0);
    basis
}

/// n-dimensional volume: exact for polytopes (n ≤ 3) and balls, otherwise the
/// radial quadrature (1/n) Σ w ρ(u)ⁿ, which needs o ∈ K.
pub fn volume_convex(k: &ConvexBody, grid: &DirectionGrid) -> Result<f64> {
    if k.dim() != grid.dim() {
        return arg("volume_convex: dimension mismatch");
    }
    let n = k.dim();
    match k.repr() {
        Repr::VPolytope(p) if p.hull().is_some() => return Ok(p.hull().unwrap().volume()),
        Repr::Ball { radius, .. } => return Ok(unit_ball_volume(n) * radius.powi(n as i32)),
        _ => {}
    }
    let hvals = support_on_grid(k, grid);
    if let Some((i, v)) = hvals.iter().enumerate().find(|(_, v)| **v < -1e-9) {
        return domain(format!(
            "volume_convex: origin not in body (support {v:e} in direction {:?})",
            grid.directions()[i].as_slice()
        ));
    }
    let terms: Vec<f64> = grid
        .directions()
        .par_iter()
        .zip(grid.weights())
        .map(|(u, w)| {
            let rho = k.radial_exact(u).unwrap_or_else(|| radial_grid(k, u, grid, Some(&hvals)));
            w * rho.powi(n as i32) / n as f64
        })
        .collect();
    Ok(pairwise_sum(&terms))
}
