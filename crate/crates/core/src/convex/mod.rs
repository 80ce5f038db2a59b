//! Convex bodies described by their support functions.

mod ops;
mod unconditional;

pub use ops::{
    hausdorff_distance, polar_body, project_body, radial_from_support, support_on_grid, transform_body,
    volume_convex,
};
pub use unconditional::{unconditional_hull, UnconditionalHull};

use crate::error::{arg, Result};
use crate::geometry::{dot, norm, DirectionGrid, LinearMap, Subspace, Vector};
use crate::hull::Hull;
use std::fmt;
use std::sync::Arc;

/// A support-function formula node: the result of an operation on bodies.
pub trait SupportOp: Send + Sync {
    /// Short tag used in debug output and reports.
    fn name(&self) -> String;
    fn dim(&self) -> usize;
    /// h(x) for any x (not necessarily unit).
    fn support(&self, x: &[f64]) -> f64;
    /// Exact radial function when the node knows it.
    fn radial_exact(&self, _x: &[f64]) -> Option<f64> {
        None
    }
}

/// A polytope given by its extreme points.
#[derive(Clone, Debug)]
pub struct VPolytope {
    dim: usize,
    vertices: Vec<Vector>,
    hull: Option<Hull>,
}

impl VPolytope {
    /// Reduces `points` to extreme points (n ≤ 3); in higher dimensions only
    /// duplicates are removed.
    pub fn new(points: Vec<Vector>) -> Result<Self> {
        let Some(first) = points.first() else {
            return arg("polytope needs at least one point");
        };
        let n = first.dim();
        if points.iter().any(|p| p.dim() != n) {
            return arg("polytope points have mixed dimensions");
        }
        if n <= 3 {
            let hull = Hull::new(&points);
            Ok(VPolytope { dim: n, vertices: hull.vertices().to_vec(), hull: Some(hull) })
        } else {
            let mut vertices: Vec<Vector> = Vec::new();
            for p in points {
                if !vertices.iter().any(|v| norm(&v.sub(&p)) <= crate::hull::DEDUP_TOL) {
                    vertices.push(p);
                }
            }
            Ok(VPolytope { dim: n, vertices, hull: None })
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vector] {
        &self.vertices
    }

    /// Hull structure (available for n ≤ 3).
    pub fn hull(&self) -> Option<&Hull> {
        self.hull.as_ref()
    }

    pub fn support(&self, x: &[f64]) -> f64 {
        self.vertices.iter().map(|v| dot(v, x)).fold(f64::NEG_INFINITY, f64::max)
    }
}

#[derive(Clone)]
pub(crate) enum Repr {
    VPolytope(VPolytope),
    Ball { center: Vector, radius: f64 },
    SupportSampled { grid: Arc<DirectionGrid>, values: Vec<f64> },
    Transformed { map: LinearMap, inner: ConvexBody },
    /// K° for a body with o in its interior: h = 1/ρ_K and ρ = 1/h_K.
    Polar { body: ConvexBody, grid: Arc<DirectionGrid> },
    Op(Arc<dyn SupportOp>),
}

/// A compact convex set in R^n. Cloning is cheap.
#[derive(Clone)]
pub struct ConvexBody {
    dim: usize,
    repr: Arc<Repr>,
}

impl fmt::Debug for ConvexBody {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.repr {
            Repr::VPolytope(p) => write!(f, "VPolytope({:?})", p.vertices),
            Repr::Ball { center, radius } => write!(f, "Ball({center:?}, {radius})"),
            Repr::SupportSampled { grid, .. } => write!(f, "SupportSampled(n={}, m={})", self.dim, grid.len()),
            Repr::Transformed { map, inner } => write!(f, "Transformed({:?}, {inner:?})", map.rows()),
            Repr::Polar { body, .. } => write!(f, "Polar({body:?})"),
            Repr::Op(op) => write!(f, "Op({})", op.name()),
        }
    }
}

impl ConvexBody {
    pub fn vpolytope(points: Vec<Vector>) -> Result<Self> {
        let p = VPolytope::new(points)?;
        Ok(ConvexBody { dim: p.dim, repr: Arc::new(Repr::VPolytope(p)) })
    }

    /// Convenience constructor from coordinate rows.
    pub fn from_points(points: &[&[f64]]) -> Result<Self> {
        let pts = points.iter().map(|p| Vector::new(p.to_vec())).collect::<Result<Vec<_>>>()?;
        ConvexBody::vpolytope(pts)
    }

    pub fn ball(center: Vector, radius: f64) -> Result<Self> {
        if !(radius >= 0.0 && radius.is_finite()) {
            return arg("ball radius must be finite and nonnegative");
        }
        Ok(ConvexBody { dim: center.dim(), repr: Arc::new(Repr::Ball { center, radius }) })
    }

    /// The Euclidean unit ball Bⁿ.
    pub fn unit_ball(n: usize) -> Self {
        ConvexBody::ball(Vector::zeros(n), 1.0).expect("unit ball")
    }

    /// The box [−1,1]ⁿ scaled by `half_width`.
    pub fn cube(n: usize, half_width: f64) -> Self {
        let pts = (0..1usize << n)
            .map(|mask| {
                Vector::raw(
                    (0..n)
                        .map(|i| if mask >> i & 1 == 1 { half_width } else { -half_width })
                        .collect(),
                )
            })
            .collect();
        ConvexBody::vpolytope(pts).expect("cube")
    }

    /// The singleton {o}.
    pub fn origin(n: usize) -> Self {
        ConvexBody::vpolytope(vec![Vector::zeros(n)]).expect("origin")
    }

    pub fn support_sampled(grid: Arc<DirectionGrid>, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return arg("support_sampled: one value per grid direction required");
        }
        if values.iter().any(|v| !v.is_finite()) {
            return arg("support_sampled: values must be finite");
        }
        Ok(ConvexBody { dim: grid.dim(), repr: Arc::new(Repr::SupportSampled { grid, values }) })
    }

    pub fn from_op(op: Arc<dyn SupportOp>) -> Self {
        ConvexBody { dim: op.dim(), repr: Arc::new(Repr::Op(op)) }
    }

    pub(crate) fn repr(&self) -> &Repr {
        &self.repr
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_vpolytope(&self) -> Option<&VPolytope> {
        match &*self.repr {
            Repr::VPolytope(p) => Some(p),
            _ => None,
        }
    }

    pub fn is_vpolytope(&self) -> bool {
        self.as_vpolytope().is_some()
    }

    /// Support function h_K(x).
    pub fn support(&self, x: &[f64]) -> f64 {
        match &*self.repr {
            Repr::VPolytope(p) => p.support(x),
            Repr::Ball { center, radius } => dot(center, x) + radius * norm(x),
            Repr::SupportSampled { grid, values } => sampled_support(grid, values, x),
            Repr::Transformed { map, inner } => inner.support(&map.apply_transpose(x)),
            Repr::Polar { body, grid } => {
                if norm(x) == 0.0 {
                    0.0
                } else {
                    1.0 / ops::radial_of(body, x, grid)
                }
            }
            Repr::Op(op) => op.support(x),
        }
    }

    /// Radial function when it can be computed exactly; `None` otherwise.
    pub fn radial_exact(&self, x: &[f64]) -> Option<f64> {
        match &*self.repr {
            Repr::VPolytope(p) => p.hull.as_ref().map(|h| h.radial(x)),
            Repr::Ball { center, radius } => {
                let xx = dot(x, x);
                let cc = dot(center, center);
                if cc > radius * radius {
                    return Some(0.0);
                }
                let xc = dot(x, center);
                let disc = xc * xc - xx * (cc - radius * radius);
                Some((xc + disc.max(0.0).sqrt()) / xx)
            }
            Repr::SupportSampled { .. } => None,
            Repr::Transformed { map, inner } => map.apply_inverse(x).and_then(|y| inner.radial_exact(&y)),
            Repr::Polar { body, .. } => Some(1.0 / body.support(x)),
            Repr::Op(op) => op.radial_exact(x),
        }
    }

    /// rK. Polytopes and balls stay materialized.
    pub fn scale(&self, r: f64) -> ConvexBody {
        match &*self.repr {
            Repr::VPolytope(p) => {
                ConvexBody::vpolytope(p.vertices.iter().map(|v| v.scale(r)).collect()).expect("scaled polytope")
            }
            Repr::Ball { center, radius } if r >= 0.0 => {
                ConvexBody::ball(center.scale(r), radius * r).expect("scaled ball")
            }
            _ => ConvexBody::from_op(Arc::new(Scaled { factor: r, body: self.clone() })),
        }
    }

    /// −K.
    pub fn reflect(&self) -> ConvexBody {
        match &*self.repr {
            Repr::Ball { center, radius } => ConvexBody::ball(center.neg(), *radius).expect("reflected ball"),
            _ => self.scale(-1.0),
        }
    }

    /// K + t.
    pub fn translate(&self, t: &Vector) -> ConvexBody {
        match &*self.repr {
            Repr::VPolytope(p) => {
                ConvexBody::vpolytope(p.vertices.iter().map(|v| v.add(t)).collect()).expect("translated polytope")
            }
            Repr::Ball { center, radius } => ConvexBody::ball(center.add(t), *radius).expect("translated ball"),
            _ => ConvexBody::from_op(Arc::new(Translated { shift: t.clone(), body: self.clone() })),
        }
    }

    /// True when K = {o} up to `tol` (checked exactly for polytopes and balls,
    /// otherwise on the supplied grid).
    pub fn is_origin_point(&self, tol: f64, grid: &DirectionGrid) -> bool {
        match &*self.repr {
            Repr::VPolytope(p) => p.vertices.iter().all(|v| v.norm() <= tol),
            Repr::Ball { center, radius } => center.norm() <= tol && *radius <= tol,
            _ => grid.directions().iter().all(|u| self.support(u).abs() <= tol),
        }
    }
}

/// Support of the polytope ∩{y : y·v ≤ h_v} cut out by the samples. By LP
/// duality it is the least Σ λ_v h_v over λ ≥ 0 with Σ λ_v v = x; the
/// minimum is taken over cones spanned by nearby grid directions, which is
/// exact in the plane and an upper bound (off by O(spacing²)) otherwise.
fn sampled_support(grid: &DirectionGrid, values: &[f64], x: &[f64]) -> f64 {
    let r = norm(x);
    if r == 0.0 {
        return 0.0;
    }
    let i = grid.nearest(x);
    // Grid directions give back the stored sample unchanged.
    if grid.directions()[i].as_slice() == x {
        return values[i];
    }
    let n = grid.dim();
    if n == 1 {
        return r * values[i];
    }
    let ids = grid.nearest_k(x, if n == 2 { 4 } else { n + 3 });
    let dirs = grid.directions();
    let mut best = f64::INFINITY;
    let mut pick = vec![0usize; n];
    combinations(ids.len(), n, &mut pick, 0, 0, &mut |c| {
        let Some(lambda) = cone_coordinates(c.iter().map(|&j| dirs[ids[j]].as_slice()), x) else { return };
        if lambda.iter().all(|l| *l >= -1e-12 * r) {
            let val: f64 = c.iter().zip(lambda.iter()).map(|(&j, l)| l * values[ids[j]]).sum();
            if val.is_finite() {
                best = best.min(val);
            }
        }
    });
    if best.is_finite() {
        best
    } else {
        r * values[i]
    }
}

/// λ with Σ λ_j v_j = x, or None when the v_j are (nearly) dependent.
fn cone_coordinates<'a>(vs: impl Iterator<Item = &'a [f64]>, x: &[f64]) -> Option<Vec<f64>> {
    let vs: Vec<&[f64]> = vs.collect();
    let n = x.len();
    if n == 3 {
        let det3 = |a: &[f64], b: &[f64], c: &[f64]| {
            a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) + a[2] * (b[0] * c[1] - b[1] * c[0])
        };
        let d = det3(vs[0], vs[1], vs[2]);
        if d.abs() < 1e-14 {
            return None;
        }
        return Some(vec![det3(x, vs[1], vs[2]) / d, det3(vs[0], x, vs[2]) / d, det3(vs[0], vs[1], x) / d]);
    }
    let m = nalgebra::DMatrix::from_fn(n, n, |row, col| vs[col][row]);
    m.lu().solve(&nalgebra::DVector::from_column_slice(x)).map(|l| l.iter().copied().collect())
}

fn combinations(len: usize, k: usize, pick: &mut Vec<usize>, depth: usize, start: usize, f: &mut dyn FnMut(&[usize])) {
    if depth == k {
        f(pick);
        return;
    }
    for i in start..len {
        pick[depth] = i;
        combinations(len, k, pick, depth + 1, i + 1, f);
    }
}

pub(crate) fn transformed(map: LinearMap, inner: ConvexBody) -> ConvexBody {
    ConvexBody { dim: map.dim(), repr: Arc::new(Repr::Transformed { map, inner }) }
}

pub(crate) fn polar_node(body: ConvexBody, grid: Arc<DirectionGrid>) -> ConvexBody {
    ConvexBody { dim: body.dim(), repr: Arc::new(Repr::Polar { body, grid }) }
}

/// rK as a formula node (negative r reflects).
struct Scaled {
    factor: f64,
    body: ConvexBody,
}

impl SupportOp for Scaled {
    fn name(&self) -> String {
        format!("scaled({})", self.factor)
    }
    fn dim(&self) -> usize {
        self.body.dim()
    }
    fn support(&self, x: &[f64]) -> f64 {
        if self.factor >= 0.0 {
            self.factor * self.body.support(x)
        } else {
            let y: Vec<f64> = x.iter().map(|c| -c).collect();
            -self.factor * self.body.support(&y)
        }
    }
    fn radial_exact(&self, x: &[f64]) -> Option<f64> {
        if self.factor == 0.0 {
            return Some(0.0);
        }
        let y: Vec<f64> = x.iter().map(|c| c / self.factor).collect();
        self.body.radial_exact(&y)
    }
}

struct Translated {
    shift: Vector,
    body: ConvexBody,
}

impl SupportOp for Translated {
    fn name(&self) -> String {
        "translated".into()
    }
    fn dim(&self) -> usize {
        self.body.dim()
    }
    fn support(&self, x: &[f64]) -> f64 {
        self.body.support(x) + dot(&self.shift, x)
    }
}

/// K|S.
pub(crate) struct Projected {
    pub subspace: Subspace,
    pub body: ConvexBody,
}

impl SupportOp for Projected {
    fn name(&self) -> String {
        "projected".into()
    }
    fn dim(&self) -> usize {
        self.body.dim()
    }
    fn support(&self, x: &[f64]) -> f64 {
        self.body.support(&self.subspace.project(x))
    }
}

/// K₁ + … + K_m with support h_{K₁} + … + h_{K_m}.
pub struct MinkowskiNode(pub Vec<ConvexBody>);

impl SupportOp for MinkowskiNode {
    fn name(&self) -> String {
        "minkowski".into()
    }
    fn dim(&self) -> usize {
        self.0[0].dim()
    }
    fn support(&self, x: &[f64]) -> f64 {
        self.0.iter().map(|k| k.support(x)).sum()
    }
}
