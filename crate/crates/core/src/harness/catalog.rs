//! Named binary operations: the genuine additions and the counterexamples.

use super::sampling::random_pair;
use super::{GridCache, SetValue};
use crate::convex::{transform_body, volume_convex, ConvexBody, SupportOp};
use crate::error::{arg, Result};
use crate::geometry::{norm, unit_ball_volume, LinearMap, Vector};
use crate::hull::enumerate_vertices;
use crate::operations::{
    blaschke_sum, lp_sum, m_combine, minkowski_sum, polar_lp_sum, radial_p_sum, symmetrize_convex, LpVariant, MSet,
    Symmetral,
};
use crate::star::{volume_star, RadialOp, StarSet};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::fmt;
use std::sync::Arc;

/// The class of sets an operation accepts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    ConvexSymmetric,
    ConvexOrigin,
    ConvexAll,
    StarSymmetric,
    StarAll,
    Interval1d,
}

impl Domain {
    pub fn tag(&self) -> &'static str {
        match self {
            Domain::ConvexSymmetric => "convex_symmetric",
            Domain::ConvexOrigin => "convex_origin",
            Domain::ConvexAll => "convex_all",
            Domain::StarSymmetric => "star_symmetric",
            Domain::StarAll => "star_all",
            Domain::Interval1d => "interval_1d",
        }
    }

    pub fn is_star(&self) -> bool {
        matches!(self, Domain::StarSymmetric | Domain::StarAll)
    }

    pub fn is_symmetric(&self) -> bool {
        matches!(self, Domain::ConvexSymmetric | Domain::StarSymmetric)
    }
}

/// Parameters for `make_op`. Unused fields are ignored.
#[derive(Clone, Debug, Default)]
pub struct OpParams {
    pub p: Option<f64>,
    pub q: Option<f64>,
    pub m: Option<MSet>,
    /// Grid resolution for quadrature inside the operation (default 2000).
    pub resolution: Option<usize>,
}

impl OpParams {
    pub fn with_p(p: f64) -> Self {
        OpParams { p: Some(p), ..Default::default() }
    }

    pub fn with_m(m: MSet) -> Self {
        OpParams { m: Some(m), ..Default::default() }
    }
}

type Evaluator = dyn Fn(&SetValue, &SetValue) -> Result<SetValue> + Send + Sync;

/// A binary operation on a declared domain.
#[derive(Clone)]
pub struct BinaryOp {
    name: String,
    domain: Domain,
    params: OpParams,
    eval: Arc<Evaluator>,
    grids: Arc<GridCache>,
}

impl fmt::Debug for BinaryOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryOp({}, {})", self.name, self.domain.tag())
    }
}

impl BinaryOp {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn params(&self) -> &OpParams {
        &self.params
    }

    pub fn grids(&self) -> &Arc<GridCache> {
        &self.grids
    }

    pub fn apply(&self, a: &SetValue, b: &SetValue) -> Result<SetValue> {
        if a.dim() != b.dim() {
            return arg(format!("{}: dimension mismatch", self.name));
        }
        (self.eval)(a, b)
    }
}

/// Catalog names accepted by `make_op`.
pub const CATALOG: &[&str] = &[
    "minkowski",
    "lp",
    "lp_extended",
    "m_add",
    "blaschke",
    "polar_lp",
    "radial",
    "ex2",
    "ex1",
    "ex4",
    "ex5",
    "ex5_star",
    "ex5555",
    "ex555",
    "ex3",
    "introex",
    "not_lp",
];

/// Looks up a catalog operation and spot-checks it on 10 random pairs.
pub fn make_op(name: &str, params: &OpParams) -> Result<BinaryOp> {
    let grids = Arc::new(GridCache::new(params.resolution.unwrap_or(2000)));
    let g = grids.clone();
    let need_p = |lo: f64| -> Result<f64> {
        match params.p {
            Some(p) if p >= lo => Ok(p),
            Some(p) => arg(format!("{name}: p must be at least {lo}, got {p}")),
            None => arg(format!("{name}: parameter p is required")),
        }
    };
    let (domain, eval): (Domain, Arc<Evaluator>) = match name {
        "minkowski" => (Domain::ConvexAll, convex2(minkowski_sum)),
        "lp" => {
            let p = need_p(1.0)?;
            (Domain::ConvexOrigin, convex2(move |k, l| lp_sum(k, l, p, LpVariant::Classic)))
        }
        "lp_extended" => {
            let p = need_p(1.0)?;
            (Domain::ConvexAll, convex2(move |k, l| lp_sum(k, l, p, LpVariant::Extended)))
        }
        "m_add" => {
            let Some(m) = params.m.clone() else { return arg("m_add: parameter m is required") };
            if m.arity() != 2 {
                return arg("m_add: M must lie in R^2");
            }
            (Domain::ConvexSymmetric, convex2(move |k, l| Ok(m_combine(&[k.clone(), l.clone()], &m)?.body())))
        }
        "blaschke" => (Domain::ConvexAll, convex2(blaschke_sum)),
        "polar_lp" => {
            let p = match params.p {
                Some(p) if p <= -1.0 => p,
                _ => return arg("polar_lp: parameter p ≤ −1 is required"),
            };
            (Domain::ConvexOrigin, convex2(move |k, l| polar_lp_sum(k, l, p, &g.get(k.dim()))))
        }
        "radial" => {
            let p = match params.p {
                Some(p) if p != 0.0 && !p.is_nan() => p,
                _ => return arg("radial: nonzero parameter p is required"),
            };
            (Domain::StarAll, star2(move |k, l| radial_p_sum(k, l, p)))
        }
        "ex2" => (Domain::ConvexSymmetric, convex2(|k, l| Ok(pointwise(k, l, "ex2", f_sinh)))),
        "ex1" => (Domain::ConvexSymmetric, convex2(|k, l| Ok(pointwise(k, l, "ex1", f_six)))),
        "ex4" => (Domain::ConvexSymmetric, convex2(cap_or_cup)),
        "ex5" => (
            Domain::ConvexSymmetric,
            Arc::new(move |a: &SetValue, b: &SetValue| {
                let r = volume_radius(a, &g)? + volume_radius(b, &g)?;
                Ok(SetValue::Convex(ConvexBody::ball(Vector::zeros(a.dim()), r)?))
            }),
        ),
        "ex5_star" => (
            Domain::StarSymmetric,
            Arc::new(move |a: &SetValue, b: &SetValue| {
                let r = volume_radius(a, &g)? + volume_radius(b, &g)?;
                let n = a.dim();
                let ball = ConvexBody::ball(Vector::zeros(n), r)?;
                Ok(SetValue::Star(StarSet::from_convex(ball, g.get(n))?))
            }),
        ),
        "ex5555" => (
            Domain::ConvexSymmetric,
            convex2(move |k, l| {
                let n = k.dim();
                if n < 2 {
                    return arg("ex5555 needs n ≥ 2");
                }
                let grid = g.get(n);
                let turn = |body: &ConvexBody, sign: f64| -> Result<ConvexBody> {
                    let v = volume_convex(body, &grid)?;
                    transform_body(body, &LinearMap::rotation(n, 0, 1, sign * v))
                };
                let sum = minkowski_sum(&turn(k, 1.0)?, &turn(l, 1.0)?)?;
                turn(&sum, -1.0)
            }),
        ),
        "ex555" => (
            Domain::ConvexAll,
            convex2(move |k, l| {
                let grid = g.get(k.dim());
                let (vk, vl) = (volume_convex(k, &grid)?, volume_convex(l, &grid)?);
                minkowski_sum(&k.scale(1.0 + vl), &l.scale(1.0 + vk))
            }),
        ),
        "ex3" => (
            Domain::StarSymmetric,
            star2(|k, l| {
                if k.dim() < 2 {
                    return arg("ex3 needs n ≥ 2");
                }
                Ok(StarSet::from_op(Arc::new(DirectionalSum { parts: [k.clone(), l.clone()] })))
            }),
        ),
        "introex" => (
            Domain::ConvexAll,
            convex2(|k, l| {
                minkowski_sum(&symmetrize_convex(k, Symmetral::Central)?, &symmetrize_convex(l, Symmetral::Central)?)
            }),
        ),
        "not_lp" => {
            let p = need_p(1.0)?;
            let q = params.q.unwrap_or(1.0);
            if !(q >= 1.0) {
                return arg("not_lp: q must be at least 1");
            }
            (
                Domain::ConvexAll,
                convex2(move |k, l| {
                    let dk = symmetrize_convex(k, Symmetral::PCentral(q))?;
                    let dl = symmetrize_convex(l, Symmetral::PCentral(q))?;
                    lp_sum(&dk, &dl, p, LpVariant::Classic)
                }),
            )
        }
        _ => return arg(format!("unknown operation '{name}'")),
    };
    let op = BinaryOp { name: name.to_string(), domain, params: params.clone(), eval, grids };
    spot_check(&op)?;
    Ok(op)
}

/// Evaluates the operation on 10 seeded planar pairs and checks the results
/// have finite support (or radial) values.
fn spot_check(op: &BinaryOp) -> Result<()> {
    if op.domain == Domain::Interval1d {
        return Ok(());
    }
    // Blaschke needs full-dimensional inputs, which the generator provides.
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let probe = crate::geometry::sphere_grid(2, 64, 0)?;
    for _ in 0..10 {
        let (a, b) = random_pair(op.domain, 2, &mut rng, &op.grids)?;
        let out = op.apply(&a, &b)?;
        if probe.directions().iter().any(|u| !out.value_at(u).is_finite()) {
            return arg(format!("{}: result is not a finite set", op.name));
        }
    }
    Ok(())
}

fn convex2(
    f: impl Fn(&ConvexBody, &ConvexBody) -> Result<ConvexBody> + Send + Sync + 'static,
) -> Arc<Evaluator> {
    Arc::new(move |a: &SetValue, b: &SetValue| match (a, b) {
        (SetValue::Convex(k), SetValue::Convex(l)) => Ok(SetValue::Convex(f(k, l)?)),
        _ => arg("operation expects convex bodies"),
    })
}

fn star2(f: impl Fn(&StarSet, &StarSet) -> Result<StarSet> + Send + Sync + 'static) -> Arc<Evaluator> {
    Arc::new(move |a: &SetValue, b: &SetValue| match (a, b) {
        (SetValue::Star(k), SetValue::Star(l)) => Ok(SetValue::Star(f(k, l)?)),
        _ => arg("operation expects star sets"),
    })
}

/// (V(X)/κ_n)^{1/n}, the radius of the ball with the volume of X.
fn volume_radius(x: &SetValue, grids: &GridCache) -> Result<f64> {
    let n = x.dim();
    let grid = grids.get(n);
    let v = match x {
        SetValue::Convex(k) => volume_convex(k, &grid)?,
        SetValue::Star(s) => match s.as_convex() {
            Some(k) => volume_convex(k, &grid)?,
            None => volume_star(s, &grid)?,
        },
    };
    Ok((v.max(0.0) / unit_ball_volume(n)).powf(1.0 / n as f64))
}

fn f_sinh(s: f64, t: f64) -> f64 {
    (s.sinh() + t.sinh()).asinh()
}

fn f_six(s: f64, t: f64) -> f64 {
    0.5 * (s + t) + 0.5 * s.hypot(t)
}

/// h(x) = f(h_K(x), h_L(x)). The formula is applied at x as given, so a
/// non-homogeneous f yields a non-homogeneous h.
struct Pointwise {
    parts: [ConvexBody; 2],
    label: &'static str,
    f: fn(f64, f64) -> f64,
}

impl SupportOp for Pointwise {
    fn name(&self) -> String {
        self.label.to_string()
    }
    fn dim(&self) -> usize {
        self.parts[0].dim()
    }
    fn support(&self, x: &[f64]) -> f64 {
        (self.f)(self.parts[0].support(x), self.parts[1].support(x))
    }
}

fn pointwise(k: &ConvexBody, l: &ConvexBody, label: &'static str, f: fn(f64, f64) -> f64) -> ConvexBody {
    ConvexBody::from_op(Arc::new(Pointwise { parts: [k.clone(), l.clone()], label, f }))
}

/// ρ(x)^{p(x)} additive with p(x) = 2 + x₂/|x| ∈ [1, 3].
struct DirectionalSum {
    parts: [StarSet; 2],
}

impl RadialOp for DirectionalSum {
    fn name(&self) -> String {
        "ex3".into()
    }
    fn dim(&self) -> usize {
        self.parts[0].dim()
    }
    fn radial(&self, x: &[f64]) -> f64 {
        let p = 2.0 + x[1] / norm(x);
        let a = self.parts[0].radial_at(x);
        let b = self.parts[1].radial_at(x);
        let top = a.max(b);
        if top == 0.0 {
            return 0.0;
        }
        top * ((a / top).powf(p) + (b / top).powf(p)).powf(1.0 / p)
    }
}

fn is_point_origin(k: &ConvexBody) -> bool {
    match k.as_vpolytope() {
        Some(p) => p.vertices().iter().all(|v| v.norm() == 0.0),
        None => false,
    }
}

/// K ∩ L unless one of them is {o}, in which case the union (the other set).
fn cap_or_cup(k: &ConvexBody, l: &ConvexBody) -> Result<ConvexBody> {
    if is_point_origin(k) {
        return Ok(l.clone());
    }
    if is_point_origin(l) {
        return Ok(k.clone());
    }
    intersect_polytopes(k, l)
}

/// K ∩ L for polytopes with n ≤ 3.
pub(crate) fn intersect_polytopes(k: &ConvexBody, l: &ConvexBody) -> Result<ConvexBody> {
    let (Some(hk), Some(hl)) = (k.as_vpolytope().and_then(|p| p.hull()), l.as_vpolytope().and_then(|p| p.hull()))
    else {
        return arg("intersection needs polytopes in dimension at most 3");
    };
    let mut hs = hk.halfspaces();
    hs.extend(hl.halfspaces());
    cut(k.dim(), &hs, hk.scale().max(hl.scale()))
}

/// The polytope {x : a·x ≤ b for all (a, b) in hs}.
pub(crate) fn cut(n: usize, hs: &[(Vec<f64>, f64)], scale: f64) -> Result<ConvexBody> {
    let tol = 1e-10 * scale.max(1.0);
    let verts = enumerate_vertices(n, hs, tol);
    if verts.is_empty() {
        return arg("intersection is empty");
    }
    ConvexBody::vpolytope(verts.into_iter().map(|v| Vector::raw(v.point)).collect())
}
