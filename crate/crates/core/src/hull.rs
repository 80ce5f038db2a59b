//! Convex hulls of point sets in R^n for n ≤ 3, including lower-dimensional
//! point sets (segments in the plane, polygons in space).
//!
//! Points are first expressed in an orthonormal frame of their affine hull;
//! the hull is then computed in that k-dimensional frame (k ≤ 3).

use crate::geometry::{dot, norm, Vector};

/// Points closer than this (relative to the point-set scale) are merged.
pub const DEDUP_TOL: f64 = 1e-10;

/// A facet of a full-dimensional polytope: outward unit normal, offset, (n−1)-volume.
#[derive(Clone, Debug)]
pub struct Facet {
    pub normal: Vector,
    pub offset: f64,
    pub area: f64,
}

#[derive(Clone, Debug)]
enum Local {
    Point,
    /// Interval [lo, hi] in the single local coordinate.
    Interval { lo: f64, hi: f64 },
    /// Counterclockwise polygon in local coordinates.
    Polygon(Vec<[f64; 2]>),
    /// Triangulated boundary; triangles index into `local_pts`, outward oriented.
    Polyhedron { pts: Vec<[f64; 3]>, tris: Vec<[usize; 3]> },
}

/// Convex hull of a finite point set in R^n, n ≤ 3.
#[derive(Clone, Debug)]
pub struct Hull {
    n: usize,
    origin: Vec<f64>,
    basis: Vec<Vec<f64>>,
    complement: Vec<Vec<f64>>,
    scale: f64,
    vertices: Vec<Vector>,
    local: Local,
    /// Local facets (unit normal in local coordinates, offset).
    local_facets: Vec<(Vec<f64>, f64, f64)>,
}

impl Hull {
    /// Hull of `points` (all of dimension n ≤ 3). Panics on empty input.
    pub fn new(points: &[Vector]) -> Hull {
        assert!(!points.is_empty(), "hull of empty point set");
        let n = points[0].dim();
        assert!(n <= 3, "hulls are implemented for n ≤ 3");
        let origin = mean(points);
        let scale = points
            .iter()
            .map(|p| norm(&sub(p, &origin)))
            .fold(0.0, f64::max)
            .max(1e-300);
        let tol = DEDUP_TOL * scale.max(1.0);
        let basis = affine_basis(points, &origin, tol);
        let complement = complete_basis(n, &basis);
        let coords: Vec<Vec<f64>> = points
            .iter()
            .map(|p| {
                let d = sub(p, &origin);
                basis.iter().map(|b| dot(&d, b)).collect()
            })
            .collect();
        let k = basis.len();
        let (idx, local) = match k {
            0 => (vec![0], Local::Point),
            1 => {
                let (mut lo, mut hi) = (0, 0);
                for (i, c) in coords.iter().enumerate() {
                    if c[0] < coords[lo][0] {
                        lo = i;
                    }
                    if c[0] > coords[hi][0] {
                        hi = i;
                    }
                }
                (vec![lo, hi], Local::Interval { lo: coords[lo][0], hi: coords[hi][0] })
            }
            2 => {
                let pts: Vec<[f64; 2]> = coords.iter().map(|c| [c[0], c[1]]).collect();
                let idx = hull2(&pts, tol);
                let poly = idx.iter().map(|&i| pts[i]).collect();
                (idx, Local::Polygon(poly))
            }
            _ => {
                let pts: Vec<[f64; 3]> = coords.iter().map(|c| [c[0], c[1], c[2]]).collect();
                let tris = hull3(&pts, tol);
                let used = corners3(&pts, &tris, tol);
                (used, Local::Polyhedron { pts, tris })
            }
        };
        let vertices = idx.iter().map(|&i| points[i].clone()).collect();
        let mut hull = Hull {
            n,
            origin,
            basis,
            complement,
            scale,
            vertices,
            local,
            local_facets: Vec::new(),
        };
        hull.local_facets = hull.compute_local_facets();
        hull
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Dimension of the affine hull.
    pub fn affine_dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_full_dim(&self) -> bool {
        self.basis.len() == self.n
    }

    /// Extreme points.
    pub fn vertices(&self) -> &[Vector] {
        &self.vertices
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    fn compute_local_facets(&self) -> Vec<(Vec<f64>, f64, f64)> {
        match &self.local {
            Local::Point => Vec::new(),
            Local::Interval { lo, hi } => vec![(vec![1.0], *hi, 1.0), (vec![-1.0], -lo, 1.0)],
            Local::Polygon(p) => {
                let m = p.len();
                (0..m)
                    .map(|i| {
                        let a = p[i];
                        let b = p[(i + 1) % m];
                        let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
                        let len = (dx * dx + dy * dy).sqrt();
                        let nrm = vec![dy / len, -dx / len];
                        let off = nrm[0] * a[0] + nrm[1] * a[1];
                        (nrm, off, len)
                    })
                    .collect()
            }
            Local::Polyhedron { pts, tris } => {
                // Group triangles by outward normal: distinct facets of a convex
                // polytope have distinct normals.
                let mut groups: Vec<([f64; 3], f64, Vec<usize>)> = Vec::new();
                for t in tris {
                    let (a, b, c) = (pts[t[0]], pts[t[1]], pts[t[2]]);
                    let cr = cross(sub3(b, a), sub3(c, a));
                    let len = norm3(cr);
                    if len == 0.0 {
                        continue;
                    }
                    let u = [cr[0] / len, cr[1] / len, cr[2] / len];
                    let area = 0.5 * len;
                    match groups.iter_mut().find(|g| {
                        let gn = norm3(g.0);
                        let gu = [g.0[0] / gn, g.0[1] / gn, g.0[2] / gn];
                        norm3(sub3(gu, u)) < 1e-7
                    }) {
                        Some(g) => {
                            for j in 0..3 {
                                g.0[j] += u[j] * area;
                            }
                            g.1 += area;
                            g.2.extend_from_slice(t);
                        }
                        None => groups.push(([u[0] * area, u[1] * area, u[2] * area], area, t.to_vec())),
                    }
                }
                groups
                    .into_iter()
                    .map(|(sum, area, ids)| {
                        let l = norm3(sum);
                        let u = vec![sum[0] / l, sum[1] / l, sum[2] / l];
                        let off = ids
                            .iter()
                            .map(|&i| u[0] * pts[i][0] + u[1] * pts[i][1] + u[2] * pts[i][2])
                            .fold(f64::NEG_INFINITY, f64::max);
                        (u, off, area)
                    })
                    .collect()
            }
        }
    }

    fn to_local(&self, x: &[f64]) -> (Vec<f64>, f64) {
        let d = sub(x, &self.origin);
        let c: Vec<f64> = self.basis.iter().map(|b| dot(&d, b)).collect();
        let orth: f64 = self.complement.iter().map(|b| dot(&d, b).powi(2)).sum::<f64>().sqrt();
        (c, orth)
    }

    fn lift(&self, local: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        for (c, b) in local.iter().zip(&self.basis) {
            for i in 0..self.n {
                out[i] += c * b[i];
            }
        }
        out
    }

    /// Facets in R^n for a full-dimensional hull (empty otherwise).
    pub fn facets(&self) -> Vec<Facet> {
        if !self.is_full_dim() {
            return Vec::new();
        }
        self.local_facets
            .iter()
            .map(|(a, b, area)| {
                let normal = self.lift(a);
                let offset = b + dot(&normal, &self.origin);
                Facet { normal: Vector::raw(normal), offset, area: *area }
            })
            .collect()
    }

    /// Half-space description {x : a·x ≤ b}; lower-dimensional hulls include
    /// pairs of opposite inequalities for their affine hull.
    pub fn halfspaces(&self) -> Vec<(Vec<f64>, f64)> {
        let mut hs: Vec<(Vec<f64>, f64)> = self
            .local_facets
            .iter()
            .map(|(a, b, _)| {
                let normal = self.lift(a);
                let off = b + dot(&normal, &self.origin);
                (normal, off)
            })
            .collect();
        for c in &self.complement {
            let off = dot(c, &self.origin);
            hs.push((c.clone(), off));
            hs.push((c.iter().map(|x| -x).collect(), -off));
        }
        hs
    }

    /// Positive when `x` lies outside: the largest facet violation combined
    /// with the distance to the affine hull. Zero or negative inside.
    pub fn signed_distance(&self, x: &[f64]) -> f64 {
        let (c, orth) = self.to_local(x);
        let inner = match &self.local {
            Local::Point => norm(&c),
            _ => self
                .local_facets
                .iter()
                .map(|(a, b, _)| dot(a, &c) - b)
                .fold(f64::NEG_INFINITY, f64::max),
        };
        if orth <= DEDUP_TOL * self.scale.max(1.0) {
            inner
        } else if inner <= 0.0 {
            orth
        } else {
            (inner * inner + orth * orth).sqrt()
        }
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        self.signed_distance(x) <= tol
    }

    /// Radial function at `u` (≠ o): largest c ≥ 0 with cu in the hull, when
    /// o lies in the hull; 0 when o is outside.
    pub fn radial(&self, u: &[f64]) -> f64 {
        let tol = 1e-12 * self.scale.max(1.0);
        let o = vec![0.0; self.n];
        if self.signed_distance(&o) > tol {
            return 0.0;
        }
        let r = norm(u);
        let ud: Vec<f64> = self.basis.iter().map(|b| dot(u, b)).collect();
        let off_span: f64 = self.complement.iter().map(|b| dot(u, b).powi(2)).sum::<f64>().sqrt();
        if off_span > 1e-9 * r {
            return 0.0;
        }
        if matches!(self.local, Local::Point) {
            return 0.0;
        }
        let (oc, _) = self.to_local(&o);
        let mut best = f64::INFINITY;
        for (a, b, _) in &self.local_facets {
            let s = dot(a, &ud);
            if s > 1e-15 * r {
                best = best.min((b - dot(a, &oc)) / s);
            }
        }
        if best.is_finite() && best > tol {
            best
        } else {
            0.0
        }
    }

    /// n-dimensional volume (0 when not full-dimensional).
    pub fn volume(&self) -> f64 {
        if !self.is_full_dim() {
            return 0.0;
        }
        match &self.local {
            Local::Point => 0.0,
            Local::Interval { lo, hi } => hi - lo,
            Local::Polygon(p) => shoelace(p),
            Local::Polyhedron { pts, tris } => {
                let c = centroid3(pts);
                let terms: Vec<f64> = tris
                    .iter()
                    .map(|t| det3(sub3(pts[t[0]], c), sub3(pts[t[1]], c), sub3(pts[t[2]], c)) / 6.0)
                    .collect();
                crate::geometry::pairwise_sum(&terms)
            }
        }
    }

    /// Centroid of a full-dimensional hull.
    pub fn centroid(&self) -> Option<Vector> {
        if !self.is_full_dim() {
            return None;
        }
        let local: Vec<f64> = match &self.local {
            Local::Point => return None,
            Local::Interval { lo, hi } => vec![0.5 * (lo + hi)],
            Local::Polygon(p) => {
                let m = p.len();
                let (mut a, mut cx, mut cy) = (0.0, 0.0, 0.0);
                for i in 0..m {
                    let (p0, p1) = (p[i], p[(i + 1) % m]);
                    let cr = p0[0] * p1[1] - p1[0] * p0[1];
                    a += cr;
                    cx += (p0[0] + p1[0]) * cr;
                    cy += (p0[1] + p1[1]) * cr;
                }
                vec![cx / (3.0 * a), cy / (3.0 * a)]
            }
            Local::Polyhedron { pts, tris } => {
                let c = centroid3(pts);
                let (mut vol, mut acc) = (0.0, [0.0; 3]);
                for t in tris {
                    let (a, b, d) = (pts[t[0]], pts[t[1]], pts[t[2]]);
                    let v = det3(sub3(a, c), sub3(b, c), sub3(d, c)) / 6.0;
                    vol += v;
                    for j in 0..3 {
                        acc[j] += v * (a[j] + b[j] + d[j] + c[j]) / 4.0;
                    }
                }
                vec![acc[0] / vol, acc[1] / vol, acc[2] / vol]
            }
        };
        let lifted = self.lift(&local);
        Some(Vector::raw(lifted.iter().zip(&self.origin).map(|(a, b)| a + b).collect()))
    }
}

fn mean(points: &[Vector]) -> Vec<f64> {
    let n = points[0].dim();
    let mut m = vec![0.0; n];
    for p in points {
        for i in 0..n {
            m[i] += p[i];
        }
    }
    m.iter().map(|x| x / points.len() as f64).collect()
}

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Greedy orthonormal basis of the affine hull around `origin`.
fn affine_basis(points: &[Vector], origin: &[f64], tol: f64) -> Vec<Vec<f64>> {
    let n = origin.len();
    let mut basis: Vec<Vec<f64>> = Vec::new();
    while basis.len() < n {
        let mut best: Option<(f64, Vec<f64>)> = None;
        for p in points {
            let mut r = sub(p, origin);
            for _ in 0..2 {
                for b in &basis {
                    let c = dot(&r, b);
                    for i in 0..n {
                        r[i] -= c * b[i];
                    }
                }
            }
            let d = norm(&r);
            if best.as_ref().is_none_or(|(bd, _)| d > *bd) {
                best = Some((d, r));
            }
        }
        match best {
            Some((d, r)) if d > tol => basis.push(r.iter().map(|x| x / d).collect()),
            _ => break,
        }
    }
    basis
}

/// Orthonormal basis of the orthogonal complement of span(basis).
fn complete_basis(n: usize, basis: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut all: Vec<Vec<f64>> = basis.to_vec();
    let mut comp = Vec::new();
    for i in 0..n {
        if all.len() == n {
            break;
        }
        let mut r = vec![0.0; n];
        r[i] = 1.0;
        for _ in 0..2 {
            for b in &all {
                let c = dot(&r, b);
                for j in 0..n {
                    r[j] -= c * b[j];
                }
            }
        }
        let d = norm(&r);
        if d > 1e-8 {
            let u: Vec<f64> = r.iter().map(|x| x / d).collect();
            all.push(u.clone());
            comp.push(u);
        }
    }
    comp
}

fn cross2(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Andrew's monotone chain; returns indices of extreme points in CCW order.
pub(crate) fn hull2(pts: &[[f64; 2]], tol: f64) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..pts.len()).collect();
    idx.sort_by(|&a, &b| {
        pts[a][0]
            .partial_cmp(&pts[b][0])
            .unwrap()
            .then(pts[a][1].partial_cmp(&pts[b][1]).unwrap())
    });
    idx.dedup_by(|a, b| (pts[*a][0] - pts[*b][0]).abs() <= tol && (pts[*a][1] - pts[*b][1]).abs() <= tol);
    if idx.len() <= 2 {
        return idx;
    }
    // Collinear triples within `tol` of a line are dropped.
    let turn = |o: usize, a: usize, b: usize| {
        let (po, pa, pb) = (pts[o], pts[a], pts[b]);
        let len = ((pb[0] - po[0]).powi(2) + (pb[1] - po[1]).powi(2)).sqrt();
        cross2(po, pa, pb) / len.max(1e-300)
    };
    let mut lower: Vec<usize> = Vec::new();
    for &i in &idx {
        while lower.len() >= 2 && turn(lower[lower.len() - 2], lower[lower.len() - 1], i) <= tol {
            lower.pop();
        }
        lower.push(i);
    }
    let mut upper: Vec<usize> = Vec::new();
    for &i in idx.iter().rev() {
        while upper.len() >= 2 && turn(upper[upper.len() - 2], upper[upper.len() - 1], i) <= tol {
            upper.pop();
        }
        upper.push(i);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn shoelace(p: &[[f64; 2]]) -> f64 {
    let m = p.len();
    let terms: Vec<f64> = (0..m)
        .map(|i| {
            let (a, b) = (p[i], p[(i + 1) % m]);
            0.5 * (a[0] * b[1] - b[0] * a[1])
        })
        .collect();
    crate::geometry::pairwise_sum(&terms)
}

fn sub3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm3(a: [f64; 3]) -> f64 {
    dot3(a, a).sqrt()
}

fn det3(a: [f64; 3], b: [f64; 3], c: [f64; 3]) -> f64 {
    dot3(a, cross(b, c))
}

fn centroid3(pts: &[[f64; 3]]) -> [f64; 3] {
    let mut c = [0.0; 3];
    for p in pts {
        for j in 0..3 {
            c[j] += p[j];
        }
    }
    c.map(|x| x / pts.len() as f64)
}

/// Incremental 3D hull of a full-dimensional point set. Points within `eps`
/// of a face plane count as inside. Returns outward-oriented triangles.
pub(crate) fn hull3(pts: &[[f64; 3]], eps: f64) -> Vec<[usize; 3]> {
    let n = pts.len();
    let i0 = (0..n)
        .min_by(|&a, &b| pts[a].partial_cmp(&pts[b]).unwrap())
        .unwrap();
    let i1 = (0..n)
        .max_by(|&a, &b| {
            norm3(sub3(pts[a], pts[i0]))
                .partial_cmp(&norm3(sub3(pts[b], pts[i0])))
                .unwrap()
        })
        .unwrap();
    let line = sub3(pts[i1], pts[i0]);
    let i2 = (0..n)
        .max_by(|&a, &b| {
            norm3(cross(line, sub3(pts[a], pts[i0])))
                .partial_cmp(&norm3(cross(line, sub3(pts[b], pts[i0]))))
                .unwrap()
        })
        .unwrap();
    let pn = cross(line, sub3(pts[i2], pts[i0]));
    let i3 = (0..n)
        .max_by(|&a, &b| {
            dot3(pn, sub3(pts[a], pts[i0]))
                .abs()
                .partial_cmp(&dot3(pn, sub3(pts[b], pts[i0])).abs())
                .unwrap()
        })
        .unwrap();
    let mut faces: Vec<([usize; 3], [f64; 3], f64)> = Vec::new();
    let make = |a: usize, b: usize, c: usize| {
        let nr = cross(sub3(pts[b], pts[a]), sub3(pts[c], pts[a]));
        let l = norm3(nr);
        let u = [nr[0] / l, nr[1] / l, nr[2] / l];
        ([a, b, c], u, dot3(u, pts[a]))
    };
    let inside = centroid3(&[pts[i0], pts[i1], pts[i2], pts[i3]]);
    for (a, b, c) in [(i0, i1, i2), (i0, i1, i3), (i0, i2, i3), (i1, i2, i3)] {
        let f = make(a, b, c);
        if dot3(f.1, inside) - f.2 > 0.0 {
            faces.push(make(a, c, b));
        } else {
            faces.push(f);
        }
    }
    let seeds = [i0, i1, i2, i3];
    for p in 0..n {
        if seeds.contains(&p) {
            continue;
        }
        let visible: Vec<bool> = faces.iter().map(|f| dot3(f.1, pts[p]) - f.2 > eps).collect();
        if !visible.iter().any(|&v| v) {
            continue;
        }
        let mut edges: Vec<(usize, usize)> = Vec::new();
        for (f, &vis) in faces.iter().zip(&visible) {
            if vis {
                let t = f.0;
                edges.extend([(t[0], t[1]), (t[1], t[2]), (t[2], t[0])]);
            }
        }
        let horizon: Vec<(usize, usize)> = edges
            .iter()
            .filter(|&&(a, b)| !edges.contains(&(b, a)))
            .copied()
            .collect();
        let mut kept: Vec<([usize; 3], [f64; 3], f64)> = faces
            .iter()
            .zip(&visible)
            .filter(|(_, &v)| !v)
            .map(|(f, _)| *f)
            .collect();
        for (a, b) in horizon {
            kept.push(make(a, b, p));
        }
        faces = kept;
    }
    faces.into_iter().map(|f| f.0).collect()
}

/// Points of the triangulation that are corners of the polytope. The incremental
/// hull keeps points lying on facets or edges, so each facet (triangles with a
/// common normal) is reduced to its planar hull and only strict corners survive.
fn corners3(pts: &[[f64; 3]], tris: &[[usize; 3]], tol: f64) -> Vec<usize> {
    let mut groups: Vec<([f64; 3], Vec<usize>)> = Vec::new();
    for t in tris {
        let (a, b, c) = (pts[t[0]], pts[t[1]], pts[t[2]]);
        let cr = cross(sub3(b, a), sub3(c, a));
        let len = norm3(cr);
        if len == 0.0 {
            continue;
        }
        let u = [cr[0] / len, cr[1] / len, cr[2] / len];
        match groups.iter_mut().find(|g| norm3(sub3(g.0, u)) < 1e-7) {
            Some(g) => g.1.extend(t),
            None => groups.push((u, t.to_vec())),
        }
    }
    let mut used = Vec::new();
    for (u, mut idx) in groups {
        idx.sort_unstable();
        idx.dedup();
        let seed = if u[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
        let e1 = cross(u, seed);
        let l = norm3(e1);
        let e1 = [e1[0] / l, e1[1] / l, e1[2] / l];
        let e2 = cross(u, e1);
        let flat: Vec<[f64; 2]> = idx.iter().map(|&i| [dot3(pts[i], e1), dot3(pts[i], e2)]).collect();
        used.extend(hull2(&flat, tol).into_iter().map(|j| idx[j]));
    }
    used.sort_unstable();
    used.dedup();
    used
}

/// Solves a small dense system by Gaussian elimination with partial pivoting.
pub(crate) fn solve_small(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    let scale = a.iter().flatten().fold(0.0f64, |m, x| m.max(x.abs())).max(1e-300);
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())?;
        if a[piv][col].abs() <= 1e-12 * scale {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            for c in col..n {
                a[r][c] -= f * a[col][c];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    Some(x)
}

/// A vertex of {x : a_i·x ≤ b_i} with the indices of its tight constraints.
#[derive(Clone, Debug)]
pub struct EnumeratedVertex {
    pub point: Vec<f64>,
    pub tight: Vec<usize>,
}

/// Enumerates vertices of a bounded polyhedron in R^n (n ≤ 3) by solving every
/// n-subset of constraints. `tol` is the feasibility slack.
pub fn enumerate_vertices(n: usize, hs: &[(Vec<f64>, f64)], tol: f64) -> Vec<EnumeratedVertex> {
    let m = hs.len();
    let mut found: Vec<Vec<f64>> = Vec::new();
    let mut subsets: Vec<Vec<usize>> = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    fn rec(start: usize, m: usize, n: usize, stack: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if stack.len() == n {
            out.push(stack.clone());
            return;
        }
        for i in start..m {
            stack.push(i);
            rec(i + 1, m, n, stack, out);
            stack.pop();
        }
    }
    rec(0, m, n, &mut stack, &mut subsets);
    for s in subsets {
        let a: Vec<Vec<f64>> = s.iter().map(|&i| hs[i].0.clone()).collect();
        let b: Vec<f64> = s.iter().map(|&i| hs[i].1).collect();
        let Some(x) = solve_small(a, b) else { continue };
        if hs.iter().all(|(a, b)| dot(a, &x) <= b + tol)
            && !found.iter().any(|f| norm(&sub(f, &x)) <= tol)
        {
            found.push(x);
        }
    }
    found
        .into_iter()
        .map(|x| {
            let tight = hs
                .iter()
                .enumerate()
                .filter(|(_, (a, b))| (dot(a, &x) - b).abs() <= tol)
                .map(|(i, _)| i)
                .collect();
            EnumeratedVertex { point: x, tight }
        })
        .collect()
}

/// Intersection of two hulls in R^n (n ≤ 3) as a vertex list; `None` if empty.
pub fn intersect(a: &Hull, b: &Hull) -> Option<Vec<Vector>> {
    let n = a.dim();
    let mut hs = a.halfspaces();
    hs.extend(b.halfspaces());
    let tol = 1e-9 * a.scale().max(b.scale()).max(1.0);
    let verts = enumerate_vertices(n, &hs, tol);
    if verts.is_empty() {
        None
    } else {
        Some(verts.into_iter().map(|v| Vector::raw(v.point)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(c: &[&[f64]]) -> Vec<Vector> {
        c.iter().map(|p| Vector::new(p.to_vec()).unwrap()).collect()
    }

    #[test]
    fn square_with_interior_and_edge_points() {
        let h = Hull::new(&pts(&[
            &[0.0, 0.0],
            &[1.0, 0.0],
            &[1.0, 1.0],
            &[0.0, 1.0],
            &[0.5, 0.5],
            &[0.5, 0.0],
        ]));
        assert_eq!(h.vertices().len(), 4);
        assert!((h.volume() - 1.0).abs() < 1e-15);
        let c = h.centroid().unwrap();
        assert!((c[0] - 0.5).abs() < 1e-15 && (c[1] - 0.5).abs() < 1e-15);
        let total: f64 = h.facets().iter().map(|f| f.area).sum();
        assert!((total - 4.0).abs() < 1e-14);
    }

    #[test]
    fn cube_volume_facets_and_radial() {
        let mut p = Vec::new();
        for i in 0..8 {
            p.push(vec![(i & 1) as f64, ((i >> 1) & 1) as f64, ((i >> 2) & 1) as f64]);
        }
        p.push(vec![0.5, 0.5, 0.5]);
        p.push(vec![0.5, 0.5, 1.0]);
        let v: Vec<Vector> = p.into_iter().map(Vector::raw).collect();
        let h = Hull::new(&v);
        assert_eq!(h.vertices().len(), 8);
        assert!((h.volume() - 1.0).abs() < 1e-14);
        let f = h.facets();
        assert_eq!(f.len(), 6);
        for facet in &f {
            assert!((facet.area - 1.0).abs() < 1e-14);
        }
        let c = h.centroid().unwrap();
        for j in 0..3 {
            assert!((c[j] - 0.5).abs() < 1e-14);
        }
        // o is a vertex: rays into the cube have positive length, others zero.
        assert!((h.radial(&[1.0, 1.0, 1.0]) - 1.0).abs() < 1e-14);
        assert_eq!(h.radial(&[-1.0, 0.0, 0.0]), 0.0);
    }

    #[test]
    fn lower_dimensional_hulls() {
        let seg = Hull::new(&pts(&[&[-1.0, 0.0], &[1.0, 0.0], &[0.2, 0.0]]));
        assert_eq!(seg.affine_dim(), 1);
        assert_eq!(seg.vertices().len(), 2);
        assert_eq!(seg.volume(), 0.0);
        assert!((seg.radial(&[1.0, 0.0]) - 1.0).abs() < 1e-15);
        assert_eq!(seg.radial(&[0.0, 1.0]), 0.0);
        assert!(seg.contains(&[0.5, 0.0], 1e-12));
        assert!(!seg.contains(&[0.5, 0.1], 1e-12));
        let square = Hull::new(&pts(&[
            &[0.0, 0.0, 0.0],
            &[1.0, 0.0, 0.0],
            &[1.0, 1.0, 0.0],
            &[0.0, 1.0, 0.0],
        ]));
        assert_eq!(square.affine_dim(), 2);
        assert!((square.radial(&[1.0, 1.0, 0.0]) - 1.0).abs() < 1e-14);
        let point = Hull::new(&pts(&[&[0.0, 0.0]]));
        assert_eq!(point.radial(&[1.0, 0.0]), 0.0);
    }

    #[test]
    fn intersection_of_crossing_segments_is_origin() {
        let a = Hull::new(&pts(&[&[-1.0, 0.0], &[1.0, 0.0]]));
        let b = Hull::new(&pts(&[&[0.0, -1.0], &[0.0, 1.0]]));
        let v = intersect(&a, &b).unwrap();
        assert_eq!(v.len(), 1);
        assert!(v[0].norm() < 1e-12);
    }

    #[test]
    fn intersection_of_squares() {
        let a = Hull::new(&pts(&[&[-1.0, -1.0], &[1.0, -1.0], &[1.0, 1.0], &[-1.0, 1.0]]));
        let b = Hull::new(&pts(&[&[0.0, -1.5], &[1.5, 0.0], &[0.0, 1.5], &[-1.5, 0.0]]));
        let v = intersect(&a, &b).unwrap();
        let h = Hull::new(&v);
        // The diamond cuts a right triangle with legs 1/2 off each corner.
        assert_eq!(h.vertices().len(), 8);
        assert!((h.volume() - 3.5).abs() < 1e-12);
    }
}
