//! M-combinations ⊕_M(K₁,…,K_m) = ∪ {a₁K₁ + ⋯ + a_mK_m : a ∈ M}.

use super::{contains_origin, is_symmetric};
use crate::convex::{unconditional_hull, ConvexBody, SupportOp, VPolytope};
use crate::error::{arg, Result};
use crate::geometry::{norm, sphere_grid, Vector};
use crate::hull::Hull;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;
use std::f64::consts::FRAC_PI_2;
use std::sync::Arc;

/// Samples of M used by the uncertified path when no count is given.
pub const DEFAULT_SAMPLES: usize = 2000;

/// A compact coefficient set M ⊂ R^m.
#[derive(Clone, Debug)]
pub enum MSet {
    /// conv of finitely many points.
    Polytope(ConvexBody),
    /// {((1−t)^{1/p′}, t^{1/p′}) : t ∈ [0,1]} ⊂ R², p ∈ [1, ∞].
    LpCurve { p: f64 },
    /// [−1,1]^m.
    Box { m: usize },
    /// conv{e₁,…,e_m}.
    Simplex { m: usize },
    /// Unit ball of l^m_q.
    LpBall { m: usize, q: f64 },
}

impl MSet {
    pub fn polytope(points: Vec<Vector>) -> Result<MSet> {
        Ok(MSet::Polytope(ConvexBody::vpolytope(points)?))
    }

    pub fn lp_curve(p: f64) -> Result<MSet> {
        if p.is_nan() || p < 1.0 {
            return arg(format!("LpCurve needs p ≥ 1, got {p}"));
        }
        Ok(MSet::LpCurve { p })
    }

    pub fn lp_ball(m: usize, q: f64) -> Result<MSet> {
        if m == 0 || q.is_nan() || q < 1.0 {
            return arg("LpBall needs m ≥ 1 and q ≥ 1");
        }
        Ok(MSet::LpBall { m, q })
    }

    pub fn arity(&self) -> usize {
        match self {
            MSet::Polytope(b) => b.dim(),
            MSet::LpCurve { .. } => 2,
            MSet::Box { m } | MSet::Simplex { m } | MSet::LpBall { m, .. } => *m,
        }
    }

    /// h_M(s).
    pub fn support(&self, s: &[f64]) -> f64 {
        match self {
            MSet::Polytope(b) => b.support(s),
            MSet::LpCurve { p } => {
                if *p == 1.0 {
                    return s[0] + s[1];
                }
                let top = s[0].max(s[1]);
                if top <= 0.0 {
                    top
                } else {
                    lp_norm(&[s[0].max(0.0), s[1].max(0.0)], *p)
                }
            }
            MSet::Box { .. } => s.iter().map(|x| x.abs()).sum(),
            MSet::Simplex { .. } => s.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            MSet::LpBall { q, .. } => lp_norm(s, conjugate(*q)),
        }
    }

    /// max over a ∈ M of Σ |a_i| s_i, for s ≥ 0: the support of the
    /// 1-unconditional hull on the positive orthant.
    pub fn support_abs(&self, s: &[f64]) -> f64 {
        match self {
            MSet::Polytope(b) => b
                .as_vpolytope()
                .expect("polytope coefficient set")
                .vertices()
                .iter()
                .map(|v| v.iter().zip(s).map(|(a, x)| a.abs() * x).sum::<f64>())
                .fold(f64::NEG_INFINITY, f64::max),
            _ => self.support(s),
        }
    }

    /// Signs ε with ε_i a_i ≥ 0 for all a ∈ M, when M lies in a closed orthant.
    pub fn orthant(&self) -> Option<Vec<f64>> {
        match self {
            MSet::Polytope(b) => {
                let verts = b.as_vpolytope().expect("polytope coefficient set").vertices();
                let scale = verts.iter().map(|v| v.norm()).fold(1.0, f64::max);
                let tol = 1e-12 * scale;
                (0..b.dim())
                    .map(|i| {
                        if verts.iter().all(|v| v[i] >= -tol) {
                            Some(1.0)
                        } else if verts.iter().all(|v| v[i] <= tol) {
                            Some(-1.0)
                        } else {
                            None
                        }
                    })
                    .collect()
            }
            MSet::LpCurve { .. } => Some(vec![1.0; 2]),
            MSet::Simplex { m } => Some(vec![1.0; *m]),
            MSet::Box { .. } | MSet::LpBall { .. } => None,
        }
    }

    pub fn is_convex(&self) -> bool {
        match self {
            MSet::LpCurve { p } => *p == 1.0 || p.is_infinite(),
            _ => true,
        }
    }

    /// Invariant under every coordinate sign change.
    pub fn is_unconditional(&self) -> bool {
        match self {
            MSet::Box { .. } | MSet::LpBall { .. } => true,
            MSet::Simplex { .. } | MSet::LpCurve { .. } => false,
            MSet::Polytope(b) => {
                let p = b.as_vpolytope().expect("polytope coefficient set");
                let m = p.dim();
                let scale = p.vertices().iter().map(|v| v.norm()).fold(1.0, f64::max);
                p.vertices().iter().all(|v| {
                    (1..1usize << m).all(|mask| {
                        let w: Vec<f64> =
                            (0..m).map(|i| if mask >> i & 1 == 1 { -v[i] } else { v[i] }).collect();
                        match p.hull() {
                            Some(h) => h.contains(&w, 1e-9 * scale),
                            None => p.vertices().iter().any(|x| norm(&x.sub(&w)) <= 1e-9 * scale),
                        }
                    })
                })
            }
        }
    }

    /// Whether the 1-unconditional hull M̂ is convex; `None` when undecided.
    pub fn hat_convex(&self) -> Option<bool> {
        if self.orthant().is_some() || self.is_unconditional() {
            return Some(true);
        }
        match self {
            MSet::Polytope(b) if b.dim() <= 3 => unconditional_hull(b).ok().map(|u| u.convex),
            MSet::Polytope(_) => None,
            _ => Some(true),
        }
    }

    /// Points of M used to materialize a combination as a union.
    pub fn samples(&self, count: usize) -> Vec<Vec<f64>> {
        let count = count.max(2);
        match self {
            MSet::LpCurve { p } => {
                if *p == 1.0 {
                    return vec![vec![1.0, 1.0]];
                }
                // Equal angular steps keep the spacing even near the endpoints.
                let q = conjugate(*p);
                (0..count)
                    .map(|k| {
                        let th = FRAC_PI_2 * k as f64 / (count - 1) as f64;
                        let (c, s) = (th.cos(), th.sin());
                        let r = lp_norm(&[c, s], q);
                        vec![c / r, s / r]
                    })
                    .collect()
            }
            MSet::Polytope(b) => {
                polytope_samples(b.as_vpolytope().expect("polytope coefficient set").vertices(), count)
            }
            MSet::Box { m } => {
                let verts = (0..1usize << m)
                    .map(|mask| Vector::raw((0..*m).map(|i| if mask >> i & 1 == 1 { -1.0 } else { 1.0 }).collect()))
                    .collect::<Vec<_>>();
                polytope_samples(&verts, count)
            }
            MSet::Simplex { m } => polytope_samples(&(0..*m).map(|i| Vector::basis(*m, i)).collect::<Vec<_>>(), count),
            MSet::LpBall { m, q } => {
                let dirs: Vec<Vector> = if *m == 2 {
                    (0..256)
                        .map(|k| {
                            let th = std::f64::consts::TAU * k as f64 / 256.0;
                            Vector::raw(vec![th.cos(), th.sin()])
                        })
                        .collect()
                } else {
                    sphere_grid(*m, 200, 0).expect("direction grid").directions().to_vec()
                };
                let verts: Vec<Vector> = dirs.iter().map(|u| u.scale(1.0 / lp_norm(u, *q))).collect();
                polytope_samples(&verts, count)
            }
        }
    }
}

fn conjugate(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    }
}

fn lp_norm(x: &[f64], p: f64) -> f64 {
    let top = x.iter().map(|v| v.abs()).fold(0.0, f64::max);
    if p.is_infinite() || top == 0.0 {
        return top;
    }
    top * x.iter().map(|v| (v.abs() / top).powf(p)).sum::<f64>().powf(1.0 / p)
}

/// Roughly `count` points filling conv(verts): barycentric lattices on a fan
/// triangulation in the plane, lattices on segments, seeded random convex
/// combinations otherwise.
fn polytope_samples(verts: &[Vector], count: usize) -> Vec<Vec<f64>> {
    let m = verts[0].dim();
    let mut hull_verts = verts.to_vec();
    let mut affine = usize::MAX;
    if m <= 3 {
        let h = Hull::new(verts);
        hull_verts = h.vertices().to_vec();
        affine = h.affine_dim();
    }
    let lattice = |a: &Vector, b: &Vector, c: &Vector, level: usize, out: &mut Vec<Vec<f64>>| {
        for i in 0..=level {
            for j in 0..=level - i {
                let (s, t) = (i as f64 / level as f64, j as f64 / level as f64);
                out.push((0..m).map(|k| a[k] + s * (b[k] - a[k]) + t * (c[k] - a[k])).collect());
            }
        }
    };
    let mut out = Vec::new();
    match affine {
        0 => out.push(hull_verts[0].to_vec()),
        1 => {
            let (a, b) = (&hull_verts[0], &hull_verts[1]);
            for k in 0..count {
                let t = k as f64 / (count - 1) as f64;
                out.push((0..m).map(|i| a[i] + t * (b[i] - a[i])).collect());
            }
        }
        2 => {
            let tris = hull_verts.len() - 2;
            let level = ((2.0 * count as f64 / tris as f64).sqrt().ceil() as usize).max(1);
            for k in 1..hull_verts.len() - 1 {
                lattice(&hull_verts[0], &hull_verts[k], &hull_verts[k + 1], level, &mut out);
            }
        }
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            out.extend(hull_verts.iter().map(|v| v.to_vec()));
            while out.len() < count {
                let w: Vec<f64> = hull_verts.iter().map(|_| Exp1.sample(&mut rng)).collect();
                let total: f64 = w.iter().sum();
                out.push((0..m).map(|i| hull_verts.iter().zip(&w).map(|(v, c)| v[i] * c / total).sum()).collect());
            }
        }
    }
    out
}

/// A union ∪ Σ a_iK_i over finitely many samples a ∈ M, with polytope K_i in
/// R^n (n ≤ 3). As a [`SupportOp`] it describes the convex hull of the union.
#[derive(Debug)]
pub struct SampledUnion {
    dim: usize,
    bodies: Vec<VPolytope>,
    coeffs: Vec<Vec<f64>>,
    pieces: Vec<Hull>,
    boxes: Vec<(Vec<f64>, Vec<f64>)>,
    hull: Hull,
    convex: bool,
    witness: Option<Vector>,
    tol: f64,
}

impl SampledUnion {
    fn new(bodies: &[ConvexBody], coeffs: Vec<Vec<f64>>) -> Result<SampledUnion> {
        let n = bodies[0].dim();
        if n > 3 {
            return arg("sampled M-combinations are implemented for n ≤ 3");
        }
        let Some(polys) = bodies.iter().map(|b| b.as_vpolytope().cloned()).collect::<Option<Vec<_>>>() else {
            return arg("sampled M-combinations need polytope inputs");
        };
        let pieces: Vec<Hull> = coeffs
            .par_iter()
            .map(|a| {
                let mut pts = vec![Vector::zeros(n)];
                for (p, &c) in polys.iter().zip(a) {
                    let mut next = Vec::with_capacity(pts.len() * p.vertices().len());
                    for x in &pts {
                        for v in p.vertices() {
                            next.push(x.add(&v.scale(c)));
                        }
                    }
                    pts = Hull::new(&next).vertices().to_vec();
                }
                Hull::new(&pts)
            })
            .collect();
        let boxes = pieces
            .iter()
            .map(|h| {
                let lo = (0..n).map(|i| h.vertices().iter().map(|v| v[i]).fold(f64::INFINITY, f64::min)).collect();
                let hi = (0..n).map(|i| h.vertices().iter().map(|v| v[i]).fold(f64::NEG_INFINITY, f64::max)).collect();
                (lo, hi)
            })
            .collect();
        let all: Vec<Vector> = pieces.iter().flat_map(|h| h.vertices().iter().cloned()).collect();
        let hull = Hull::new(&all);

        // Every a ∈ M within `spacing` of a sample moves points by at most
        // √m·spacing·max|x|, which bounds the sampling gap.
        let spacing = coeffs
            .par_iter()
            .enumerate()
            .map(|(i, a)| {
                coeffs
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != i)
                    .map(|(_, b)| norm(&a.iter().zip(b).map(|(x, y)| x - y).collect::<Vec<_>>()))
                    .fold(f64::INFINITY, f64::min)
            })
            .reduce(|| 0.0, f64::max);
        let spacing = if spacing.is_finite() { spacing } else { 0.0 };
        let max_r = polys
            .iter()
            .flat_map(|p| p.vertices().iter().map(|v| v.norm()))
            .fold(0.0, f64::max);
        let tol = 1e-9 * hull.scale().max(1.0) + (coeffs[0].len() as f64).sqrt() * spacing * max_r;

        let mut out = SampledUnion {
            dim: n,
            bodies: polys,
            coeffs,
            pieces,
            boxes,
            hull,
            convex: true,
            witness: None,
            tol,
        };
        out.test_convexity();
        Ok(out)
    }

    /// Probes points on chords between hull vertices for membership.
    fn test_convexity(&mut self) {
        let verts = self.hull.vertices();
        let stride = verts.len().div_ceil(32).max(1);
        let sub: Vec<&Vector> = verts.iter().step_by(stride).collect();
        let mut probes = Vec::new();
        for i in 0..sub.len() {
            for j in i + 1..sub.len() {
                for k in 1..8 {
                    let f = k as f64 / 8.0;
                    probes.push(sub[i].scale(1.0 - f).add(&sub[j].scale(f)));
                }
            }
        }
        let tol = self.tol;
        let misses: Vec<(f64, Vector)> = probes
            .into_par_iter()
            .filter(|y| !self.contains(y, tol))
            .map(|y| (self.distance_bound(&y), y))
            .collect();
        if let Some((_, w)) = misses.into_iter().max_by(|a, b| a.0.partial_cmp(&b.0).unwrap()) {
            self.convex = false;
            self.witness = Some(w);
        }
    }

    /// Lower bound on the distance from y to the union.
    fn distance_bound(&self, y: &[f64]) -> f64 {
        self.pieces.iter().map(|h| h.signed_distance(y)).fold(f64::INFINITY, f64::min)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coefficients(&self) -> &[Vec<f64>] {
        &self.coeffs
    }

    /// Every vertex of every piece a₁K₁ + ⋯ + a_mK_m.
    pub fn points(&self) -> Vec<Vector> {
        self.pieces.iter().flat_map(|h| h.vertices().iter().cloned()).collect()
    }

    /// The convex hull of the union as a polytope.
    pub fn hull(&self) -> ConvexBody {
        ConvexBody::vpolytope(self.hull.vertices().to_vec()).expect("hull vertices")
    }

    /// False when some point of the hull lies farther than the sampling
    /// tolerance from the union.
    pub fn is_convex(&self) -> bool {
        self.convex
    }

    /// A hull point outside the union, when one was found.
    pub fn witness(&self) -> Option<&Vector> {
        self.witness.as_ref()
    }

    /// Sampling tolerance used by the convexity test.
    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    /// Whether y lies within `tol` of some piece.
    pub fn contains(&self, y: &[f64], tol: f64) -> bool {
        self.pieces.iter().zip(&self.boxes).any(|(h, (lo, hi))| {
            (0..self.dim).all(|i| y[i] >= lo[i] - tol && y[i] <= hi[i] + tol) && h.signed_distance(y) <= tol
        })
    }
}

impl SupportOp for SampledUnion {
    fn name(&self) -> String {
        "sampled_union".into()
    }
    fn dim(&self) -> usize {
        self.dim
    }
    fn support(&self, x: &[f64]) -> f64 {
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        let plus: Vec<f64> = self.bodies.iter().map(|p| p.support(x)).collect();
        let minus: Vec<f64> = self.bodies.iter().map(|p| p.support(&neg)).collect();
        self.coeffs
            .iter()
            .map(|a| {
                a.iter()
                    .enumerate()
                    .map(|(i, &c)| if c >= 0.0 { c * plus[i] } else { -c * minus[i] })
                    .sum::<f64>()
            })
            .fold(f64::NEG_INFINITY, f64::max)
    }
    fn radial_exact(&self, x: &[f64]) -> Option<f64> {
        Some(self.hull.radial(x))
    }
}

/// Result of an M-combination.
#[derive(Clone, Debug)]
pub enum MCombination {
    /// Convexity is guaranteed and the support formula is exact.
    Certified(ConvexBody),
    /// A sampled union with a numerical convexity flag.
    Sampled(Arc<SampledUnion>),
}

impl MCombination {
    /// The result as a convex body (the hull, for sampled unions).
    pub fn body(&self) -> ConvexBody {
        match self {
            MCombination::Certified(b) => b.clone(),
            MCombination::Sampled(u) => ConvexBody::from_op(u.clone()),
        }
    }

    pub fn is_certified(&self) -> bool {
        matches!(self, MCombination::Certified(_))
    }

    pub fn is_convex(&self) -> bool {
        match self {
            MCombination::Certified(_) => true,
            MCombination::Sampled(u) => u.is_convex(),
        }
    }

    pub fn as_sampled(&self) -> Option<&SampledUnion> {
        match self {
            MCombination::Sampled(u) => Some(u),
            MCombination::Certified(_) => None,
        }
    }
}

/// h = h_M(ε₁h_{ε₁K₁}(x), …): M in the orthant with signs ε.
struct OrthantNode {
    bodies: Vec<ConvexBody>,
    m: MSet,
    signs: Vec<f64>,
}

impl SupportOp for OrthantNode {
    fn name(&self) -> String {
        "m_combination".into()
    }
    fn dim(&self) -> usize {
        self.bodies[0].dim()
    }
    fn support(&self, x: &[f64]) -> f64 {
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        let s: Vec<f64> = self
            .bodies
            .iter()
            .zip(&self.signs)
            .map(|(k, &e)| if e > 0.0 { k.support(x) } else { -k.support(&neg) })
            .collect();
        self.m.support(&s)
    }
}

/// h = max_{a∈M} Σ|a_i| h_{K_i}(x) for o-symmetric K_i.
struct SymmetricNode {
    bodies: Vec<ConvexBody>,
    m: MSet,
}

impl SupportOp for SymmetricNode {
    fn name(&self) -> String {
        "m_combination_symmetric".into()
    }
    fn dim(&self) -> usize {
        self.bodies[0].dim()
    }
    fn support(&self, x: &[f64]) -> f64 {
        let s: Vec<f64> = self.bodies.iter().map(|k| k.support(x).max(0.0)).collect();
        self.m.support_abs(&s)
    }
}

fn check_inputs(bodies: &[ConvexBody], m: &MSet) -> Result<()> {
    let Some(first) = bodies.first() else {
        return arg("m_combine needs at least one body");
    };
    if bodies.len() != m.arity() {
        return arg(format!("m_combine: M has arity {} but {} bodies were given", m.arity(), bodies.len()));
    }
    if bodies.iter().any(|b| b.dim() != first.dim()) {
        return arg("m_combine: dimension mismatch");
    }
    Ok(())
}

/// ⊕_M(K₁,…,K_m). Certified when M lies in an orthant (and is convex or all
/// K_i contain o), or when all K_i are o-symmetric and M̂ is convex;
/// otherwise a sampled union with a convexity flag.
pub fn m_combine(bodies: &[ConvexBody], m: &MSet) -> Result<MCombination> {
    check_inputs(bodies, m)?;
    if let Some(signs) = m.orthant() {
        if m.is_convex() || bodies.iter().all(contains_origin) {
            return Ok(MCombination::Certified(ConvexBody::from_op(Arc::new(OrthantNode {
                bodies: bodies.to_vec(),
                m: m.clone(),
                signs,
            }))));
        }
    }
    if m.hat_convex() == Some(true) && bodies.iter().all(is_symmetric) {
        return Ok(MCombination::Certified(ConvexBody::from_op(Arc::new(SymmetricNode {
            bodies: bodies.to_vec(),
            m: m.clone(),
        }))));
    }
    Ok(MCombination::Sampled(Arc::new(m_combine_sampled(bodies, m, DEFAULT_SAMPLES)?)))
}

/// ⊕_M(K₁,…,K_m) materialized over about `samples` points of M.
pub fn m_combine_sampled(bodies: &[ConvexBody], m: &MSet, samples: usize) -> Result<SampledUnion> {
    check_inputs(bodies, m)?;
    SampledUnion::new(bodies, m.samples(samples))
}

/// The LYZ set {(1−t)^{1/p′}x + t^{1/p′}y : x ∈ K, y ∈ L, t ∈ [0,1]}.
pub fn lp_sum_lyz(k: &ConvexBody, l: &ConvexBody, p: f64, t_samples: usize) -> Result<SampledUnion> {
    if p.is_nan() || p <= 1.0 {
        return arg(format!("lp_sum_lyz needs p > 1, got {p}"));
    }
    if t_samples < 2 {
        return arg("lp_sum_lyz needs at least two t samples");
    }
    m_combine_sampled(&[k.clone(), l.clone()], &MSet::LpCurve { p }, t_samples)
}

/// Whether h_M is coordinatewise nondecreasing on the positive orthant,
/// tested on a grid over [0,1]^m (200 steps per axis when m = 2).
pub fn m_support_monotone(m: &MSet) -> bool {
    let dim = m.arity();
    let steps: usize = match dim {
        1 => 1000,
        2 => 200,
        3 => 30,
        4 => 12,
        _ => 6,
    };
    let total = (steps + 1).pow(dim as u32);
    (0..total).into_par_iter().all(|idx| {
        let mut s = vec![0.0; dim];
        let mut r = idx;
        for c in s.iter_mut() {
            *c = (r % (steps + 1)) as f64 / steps as f64;
            r /= steps + 1;
        }
        let h = m.support(&s);
        (0..dim).all(|i| {
            if s[i] >= 1.0 {
                return true;
            }
            let mut t = s.clone();
            t[i] += 1.0 / steps as f64;
            m.support(&t) >= h - 1e-10
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convex::{hausdorff_distance, support_on_grid};
    use crate::geometry::sphere_grid;
    use crate::operations::{lp_sum, minkowski_sum, LpVariant};

    fn v(c: &[f64]) -> Vector {
        Vector::new(c.to_vec()).unwrap()
    }

    fn square01() -> ConvexBody {
        ConvexBody::from_points(&[&[0.0, 0.0], &[1.0, 0.0], &[1.0, 1.0], &[0.0, 1.0]]).unwrap()
    }

    #[test]
    fn point_m_is_minkowski_addition() {
        let g = sphere_grid(2, 256, 0).unwrap();
        let k = square01();
        let l = ConvexBody::from_points(&[&[0.0, 0.0], &[2.0, 1.0], &[-1.0, 1.0]]).unwrap();
        let m = MSet::polytope(vec![v(&[1.0, 1.0])]).unwrap();
        let r = m_combine(&[k.clone(), l.clone()], &m).unwrap();
        assert!(r.is_certified());
        let mk = minkowski_sum(&k, &l).unwrap();
        assert!(hausdorff_distance(&r.body(), &mk, &g).unwrap() < 1e-14);
    }

    #[test]
    fn segment_m_gives_convex_hull_of_union() {
        let g = sphere_grid(2, 256, 0).unwrap();
        let k = square01();
        let l = ConvexBody::from_points(&[&[3.0, 0.0], &[4.0, 2.0], &[3.0, 1.0]]).unwrap();
        let m = MSet::polytope(vec![v(&[1.0, 0.0]), v(&[0.0, 1.0])]).unwrap();
        let r = m_combine(&[k.clone(), l.clone()], &m).unwrap();
        let mut pts = k.as_vpolytope().unwrap().vertices().to_vec();
        pts.extend(l.as_vpolytope().unwrap().vertices().iter().cloned());
        let conv = ConvexBody::vpolytope(pts).unwrap();
        assert!(hausdorff_distance(&r.body(), &conv, &g).unwrap() < 1e-14);
        let sampled = m_combine_sampled(&[k, l], &m, 500).unwrap();
        assert!(sampled.is_convex());
    }

    #[test]
    fn square_m_with_reflected_square_is_not_convex() {
        let k = square01();
        let m = MSet::Box { m: 2 };
        let r = m_combine(&[k.clone(), k.reflect()], &m).unwrap();
        let u = r.as_sampled().expect("uncertified");
        let tol = 1e-9;
        assert!(u.contains(&[0.0, 2.0], tol));
        assert!(u.contains(&[-1.0, 1.0], tol));
        assert!(!u.contains(&[-0.5, 1.5], u.tolerance()));
        assert!(!u.is_convex());
        let w = u.witness().unwrap();
        assert!(!u.contains(w, u.tolerance()));
    }

    #[test]
    fn lyz_examples() {
        let x = ConvexBody::from_points(&[&[1.0, 0.0]]).unwrap();
        let y = ConvexBody::from_points(&[&[0.0, 1.0]]).unwrap();
        let curve = lp_sum_lyz(&x, &y, 2.0, 1000).unwrap();
        assert!(!curve.is_convex());

        let k = ConvexBody::from_points(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]]).unwrap();
        let s = lp_sum_lyz(&k, &k.reflect(), 2.0, 1000).unwrap();
        assert!(s.is_convex());

        let g = sphere_grid(2, 512, 0).unwrap();
        let sq = ConvexBody::cube(2, 1.0);
        let sq2 = ConvexBody::from_points(&[&[2.0, 0.0], &[0.0, 2.0], &[-2.0, 0.0], &[0.0, -2.0]]).unwrap();
        let s = lp_sum_lyz(&sq, &sq2, 2.0, 1000).unwrap();
        let classic = lp_sum(&sq, &sq2, 2.0, LpVariant::Classic).unwrap();
        let d = hausdorff_distance(&ConvexBody::from_op(Arc::new(s)), &classic, &g).unwrap();
        assert!(d < 1e-6, "{d}");
        assert!(lp_sum_lyz(&sq, &sq2, 1.0, 10).is_err());
    }

    #[test]
    fn orthant_formula_matches_sampled_union() {
        let g = sphere_grid(2, 2000, 0).unwrap();
        let k = ConvexBody::from_points(&[&[0.2, 0.1], &[1.0, 0.3], &[0.4, 1.1]]).unwrap();
        let l = ConvexBody::from_points(&[&[-1.0, -0.5], &[0.5, -0.2], &[0.0, 0.8], &[-0.6, 0.4]]).unwrap();
        let m = MSet::polytope(vec![v(&[-1.0, 0.2]), v(&[-0.3, 1.0]), v(&[-0.1, 0.3])]).unwrap();
        assert_eq!(m.orthant(), Some(vec![-1.0, 1.0]));
        let r = m_combine(&[k.clone(), l.clone()], &m).unwrap();
        assert!(r.is_certified());
        let s = m_combine_sampled(&[k, l], &m, 1000).unwrap();
        assert!(s.is_convex());
        let d = hausdorff_distance(&r.body(), &ConvexBody::from_op(Arc::new(s)), &g).unwrap();
        assert!(d < 2e-3, "{d}");
    }

    #[test]
    fn unconditional_sets_on_symmetric_bodies() {
        let g = sphere_grid(2, 512, 0).unwrap();
        let k = ConvexBody::cube(2, 1.0);
        let l = ConvexBody::from_points(&[&[1.0, 2.0], &[-1.0, -2.0], &[0.5, -0.3], &[-0.5, 0.3]]).unwrap();
        let disc = MSet::lp_ball(2, 2.0).unwrap();
        let r = m_combine(&[k.clone(), l.clone()], &disc).unwrap();
        assert!(r.is_certified());
        let want = lp_sum(&k, &l, 2.0, LpVariant::Classic).unwrap();
        assert!(hausdorff_distance(&r.body(), &want, &g).unwrap() < 1e-12);
        let sq = m_combine(&[k.clone(), l.clone()], &MSet::Box { m: 2 }).unwrap();
        assert!(hausdorff_distance(&sq.body(), &minkowski_sum(&k, &l).unwrap(), &g).unwrap() < 1e-12);
        let l1 = MSet::lp_ball(2, 1.0).unwrap();
        let r = m_combine(&[k.clone(), l.clone()], &l1).unwrap();
        let want = lp_sum(&k, &l, f64::INFINITY, LpVariant::Classic).unwrap();
        assert!(hausdorff_distance(&r.body(), &want, &g).unwrap() < 1e-12);
    }

    #[test]
    fn rhombus_m_is_uncertified() {
        let m = MSet::polytope(vec![v(&[2.0, 1.0]), v(&[-2.0, -1.0]), v(&[-1.0, 2.0]), v(&[1.0, -2.0])]).unwrap();
        assert_eq!(m.hat_convex(), Some(false));
        assert!(!m_support_monotone(&m));
        let k = ConvexBody::cube(2, 1.0);
        let r = m_combine(&[k.clone(), k], &m).unwrap();
        assert!(!r.is_certified());
    }

    #[test]
    fn monotone_support_examples() {
        let l1 = MSet::polytope(vec![v(&[1.0, 0.0]), v(&[0.0, 1.0]), v(&[-1.0, 0.0]), v(&[0.0, -1.0])]).unwrap();
        assert!(m_support_monotone(&l1));
        assert_eq!(l1.support(&[0.3, 0.7]), 0.7);
        assert!(m_support_monotone(&MSet::Box { m: 2 }));
        assert_eq!(MSet::Box { m: 2 }.support(&[0.3, 0.7]), 1.0);
    }

    #[test]
    fn lp_curve_support() {
        let c = MSet::lp_curve(2.0).unwrap();
        assert!((c.support(&[3.0, 4.0]) - 5.0).abs() < 1e-15);
        assert_eq!(c.support(&[3.0, -4.0]), 3.0);
        assert_eq!(c.support(&[-3.0, -4.0]), -3.0);
        // Compare with dense sampling of the curve.
        let pts = c.samples(20_001);
        for s in [[1.0, 2.0], [-1.0, 0.5], [-2.0, -0.5], [0.3, -0.1]] {
            let brute = pts.iter().map(|a| a[0] * s[0] + a[1] * s[1]).fold(f64::NEG_INFINITY, f64::max);
            assert!((brute - c.support(&s)).abs() < 1e-7);
        }
    }

    #[test]
    fn lp_curve_on_bodies_with_origin_is_lp_addition() {
        let g = sphere_grid(2, 512, 0).unwrap();
        let k = ConvexBody::from_points(&[&[-0.2, -0.1], &[1.0, 0.3], &[0.4, 1.1]]).unwrap();
        let l = ConvexBody::from_points(&[&[-1.0, -0.5], &[0.5, -0.2], &[0.0, 0.8]]).unwrap();
        let r = m_combine(&[k.clone(), l.clone()], &MSet::lp_curve(3.0).unwrap()).unwrap();
        assert!(r.is_certified());
        let want = lp_sum(&k, &l, 3.0, LpVariant::Classic).unwrap();
        assert!(hausdorff_distance(&r.body(), &want, &g).unwrap() < 1e-12);
        let _ = support_on_grid(&r.body(), &g);
    }
}
