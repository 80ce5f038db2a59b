//! Star sets described by their radial functions.

use crate::convex::{radial_from_support, ConvexBody};
use crate::error::{arg, Result};
use crate::geometry::{norm, pairwise_sum, DirectionGrid, LinearMap, Vector};
use rayon::prelude::*;
use std::fmt;
use std::sync::Arc;

/// A radial-function formula node.
pub trait RadialOp: Send + Sync {
    fn name(&self) -> String;
    fn dim(&self) -> usize;
    /// ρ(x) for x ≠ o.
    fn radial(&self, x: &[f64]) -> f64;
}

#[derive(Clone)]
enum Repr {
    RadialSampled { grid: Arc<DirectionGrid>, values: Vec<f64> },
    FromConvex { body: ConvexBody, grid: Arc<DirectionGrid> },
    Transformed { map: LinearMap, inner: StarSet },
    Scaled { factor: f64, inner: StarSet },
    Op(Arc<dyn RadialOp>),
}

/// A compact set star-shaped about o, given by its radial function.
#[derive(Clone)]
pub struct StarSet {
    dim: usize,
    repr: Arc<Repr>,
}

impl fmt::Debug for StarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.repr {
            Repr::RadialSampled { grid, .. } => write!(f, "RadialSampled(n={}, m={})", self.dim, grid.len()),
            Repr::FromConvex { body, .. } => write!(f, "FromConvex({body:?})"),
            Repr::Transformed { inner, .. } => write!(f, "Transformed({inner:?})"),
            Repr::Scaled { factor, inner } => write!(f, "Scaled({factor}, {inner:?})"),
            Repr::Op(op) => write!(f, "Op({})", op.name()),
        }
    }
}

impl StarSet {
    pub fn radial_sampled(grid: Arc<DirectionGrid>, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return arg("radial_sampled: one value per grid direction required");
        }
        if values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return arg("radial_sampled: values must be finite and nonnegative");
        }
        Ok(StarSet { dim: grid.dim(), repr: Arc::new(Repr::RadialSampled { grid, values }) })
    }

    /// A convex body containing o, viewed as a star set. `grid` is used only
    /// when the radial function has no exact route.
    pub fn from_convex(body: ConvexBody, grid: Arc<DirectionGrid>) -> Result<Self> {
        if body.dim() != grid.dim() {
            return arg("from_convex: dimension mismatch");
        }
        Ok(StarSet { dim: body.dim(), repr: Arc::new(Repr::FromConvex { body, grid }) })
    }

    pub fn from_op(op: Arc<dyn RadialOp>) -> Self {
        StarSet { dim: op.dim(), repr: Arc::new(Repr::Op(op)) }
    }

    /// The singleton {o}.
    pub fn origin(n: usize, grid: Arc<DirectionGrid>) -> Self {
        StarSet::from_convex(ConvexBody::origin(n), grid).expect("origin")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The convex body behind a `FromConvex` set.
    pub fn as_convex(&self) -> Option<&ConvexBody> {
        match &*self.repr {
            Repr::FromConvex { body, .. } => Some(body),
            _ => None,
        }
    }

    /// Grid and values of a `RadialSampled` set.
    pub fn as_sampled(&self) -> Option<(&Arc<DirectionGrid>, &[f64])> {
        match &*self.repr {
            Repr::RadialSampled { grid, values } => Some((grid, values)),
            _ => None,
        }
    }

    /// ρ(x) for x ≠ o (degree −1 homogeneous).
    pub fn radial_at(&self, x: &[f64]) -> f64 {
        match &*self.repr {
            Repr::RadialSampled { grid, values } => {
                let i = grid.nearest(x);
                if grid.directions()[i].as_slice() == x {
                    values[i]
                } else {
                    values[i] / norm(x)
                }
            }
            Repr::FromConvex { body, grid } => match body.radial_exact(x) {
                Some(r) => r,
                None => radial_from_support(body, &Vector::raw(x.to_vec()), grid).unwrap_or(0.0),
            },
            Repr::Transformed { map, inner } => {
                inner.radial_at(&map.apply_inverse(x).expect("transformed star sets use invertible maps"))
            }
            Repr::Scaled { factor, inner } => {
                if *factor == 0.0 {
                    0.0
                } else {
                    factor * inner.radial_at(x)
                }
            }
            Repr::Op(op) => op.radial(x),
        }
    }

    /// rL for r ≥ 0.
    pub fn scale(&self, r: f64) -> StarSet {
        assert!(r >= 0.0, "star sets scale by nonnegative factors");
        StarSet { dim: self.dim, repr: Arc::new(Repr::Scaled { factor: r, inner: self.clone() }) }
    }

    /// φL for invertible φ.
    pub fn transform(&self, phi: &LinearMap) -> Result<StarSet> {
        if !phi.is_invertible() {
            return arg("star set transform needs an invertible map");
        }
        if phi.dim() != self.dim {
            return arg("star set transform: dimension mismatch");
        }
        Ok(StarSet { dim: self.dim, repr: Arc::new(Repr::Transformed { map: phi.clone(), inner: self.clone() }) })
    }

    /// −L.
    pub fn reflect(&self) -> StarSet {
        let mut d = vec![0.0; self.dim * self.dim];
        for i in 0..self.dim {
            d[i * self.dim + i] = -1.0;
        }
        self.transform(&LinearMap::new(self.dim, d).expect("reflection")).expect("reflection is invertible")
    }
}

/// ρ_L(x); x = o is an argument error.
pub fn radial(l: &StarSet, x: &Vector) -> Result<f64> {
    if x.dim() != l.dim() {
        return arg("radial: dimension mismatch");
    }
    if x.norm() == 0.0 {
        return arg("radial: the radial function is undefined at o");
    }
    Ok(l.radial_at(x))
}

/// Radial values on every grid direction, in grid order.
pub fn radial_on_grid(l: &StarSet, grid: &DirectionGrid) -> Vec<f64> {
    grid.directions().par_iter().map(|u| l.radial_at(u)).collect()
}

/// max over the grid of |ρ_K(u) − ρ_L(u)|.
pub fn radial_distance(k: &StarSet, l: &StarSet, grid: &DirectionGrid) -> Result<f64> {
    if k.dim() != grid.dim() || l.dim() != grid.dim() {
        return arg("radial_distance: dimension mismatch");
    }
    Ok(grid
        .directions()
        .par_iter()
        .map(|u| (k.radial_at(u) - l.radial_at(u)).abs())
        .reduce(|| 0.0, f64::max))
}

/// L ∩ l_u as the pair (ρ_L(−u), ρ_L(u)): the section is [−ρ(−u)u, ρ(u)u].
pub fn section_line(l: &StarSet, u: &Vector) -> Result<(f64, f64)> {
    let r = u.norm();
    if r == 0.0 {
        return arg("section_line: direction must be nonzero");
    }
    let unit = u.scale(1.0 / r);
    Ok((l.radial_at(&unit.neg()), l.radial_at(&unit)))
}

/// The section L ∩ l_u as a (one-dimensional) star set.
pub fn section_set(l: &StarSet, u: &Vector, grid: Arc<DirectionGrid>) -> Result<StarSet> {
    let (minus, plus) = section_line(l, u)?;
    let unit = u.scale(1.0 / u.norm());
    let seg = ConvexBody::vpolytope(vec![unit.scale(-minus), unit.scale(plus)])?;
    StarSet::from_convex(seg, grid)
}

/// (1/n) Σ w ρ(u)ⁿ over the grid.
pub fn volume_star(l: &StarSet, grid: &DirectionGrid) -> Result<f64> {
    if l.dim() != grid.dim() {
        return arg("volume_star: dimension mismatch");
    }
    let n = l.dim();
    let terms: Vec<f64> = grid
        .directions()
        .par_iter()
        .zip(grid.weights())
        .map(|(u, w)| w * l.radial_at(u).powi(n as i32) / n as f64)
        .collect();
    Ok(pairwise_sum(&terms))
}

struct Lattice {
    max: bool,
    parts: Vec<StarSet>,
}

impl RadialOp for Lattice {
    fn name(&self) -> String {
        if self.max { "union" } else { "intersection" }.into()
    }
    fn dim(&self) -> usize {
        self.parts[0].dim()
    }
    fn radial(&self, x: &[f64]) -> f64 {
        let vals = self.parts.iter().map(|p| p.radial_at(x));
        if self.max {
            vals.fold(0.0, f64::max)
        } else {
            vals.fold(f64::INFINITY, f64::min)
        }
    }
}

/// K ∪ L: radial function max(ρ_K, ρ_L).
pub fn union(parts: &[StarSet]) -> Result<StarSet> {
    lattice(parts, true)
}

/// K ∩ L: radial function min(ρ_K, ρ_L).
pub fn intersection(parts: &[StarSet]) -> Result<StarSet> {
    lattice(parts, false)
}

fn lattice(parts: &[StarSet], max: bool) -> Result<StarSet> {
    let Some(first) = parts.first() else {
        return arg("star lattice operation needs at least one set");
    };
    if parts.iter().any(|p| p.dim() != first.dim()) {
        return arg("star lattice operation: dimension mismatch");
    }
    Ok(StarSet::from_op(Arc::new(Lattice { max, parts: parts.to_vec() })))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::sphere_grid;
    use std::f64::consts::PI;

    fn v(c: &[f64]) -> Vector {
        Vector::new(c.to_vec()).unwrap()
    }

    fn grid(n: usize, m: usize) -> Arc<DirectionGrid> {
        Arc::new(sphere_grid(n, m, 0).unwrap())
    }

    #[test]
    fn radial_examples() {
        let g = grid(2, 360);
        let b = StarSet::from_convex(ConvexBody::unit_ball(2), g.clone()).unwrap();
        assert!((radial(&b, &v(&[2.0, 0.0])).unwrap() - 0.5).abs() < 1e-15);
        assert!(radial(&b, &v(&[0.0, 0.0])).is_err());
    }

    #[test]
    fn radial_distance_examples() {
        let g = grid(2, 360);
        let s1 = StarSet::from_convex(ConvexBody::from_points(&[&[-1.0, 0.0], &[1.0, 0.0]]).unwrap(), g.clone()).unwrap();
        let s2 = StarSet::from_convex(ConvexBody::from_points(&[&[0.0, -1.0], &[0.0, 1.0]]).unwrap(), g.clone()).unwrap();
        assert_eq!(radial_distance(&s1, &s2, &g).unwrap(), 1.0);
        let b = StarSet::from_convex(ConvexBody::unit_ball(2), g.clone()).unwrap();
        let b2 = StarSet::from_convex(ConvexBody::unit_ball(2).scale(2.0), g.clone()).unwrap();
        assert!((radial_distance(&b, &b2, &g).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn section_examples() {
        let g = grid(2, 360);
        let seg = StarSet::from_convex(ConvexBody::from_points(&[&[0.0, 0.0], &[1.0, 0.0]]).unwrap(), g.clone()).unwrap();
        assert_eq!(section_line(&seg, &v(&[1.0, 0.0])).unwrap(), (0.0, 1.0));
        let sq = ConvexBody::from_points(&[&[0.0, 0.0], &[1.0, 0.0], &[1.0, 1.0], &[0.0, 1.0]]).unwrap();
        let sq = StarSet::from_convex(sq, g).unwrap();
        let (a, b) = section_line(&sq, &v(&[1.0, 1.0]).normalized().unwrap()).unwrap();
        assert_eq!(a, 0.0);
        assert!((b - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn volume_examples() {
        let g = grid(2, 10_000);
        let b = StarSet::from_convex(ConvexBody::unit_ball(2), g.clone()).unwrap();
        assert!((volume_star(&b, &g).unwrap() - PI).abs() < 1e-4);
        // A segment adds nothing to the volume.
        let seg = StarSet::from_convex(ConvexBody::from_points(&[&[-2.0, 0.0], &[2.0, 0.0]]).unwrap(), g.clone()).unwrap();
        let u = union(&[b, seg]).unwrap();
        let vol = volume_star(&u, &g).unwrap();
        // The segment still occupies two quadrature cells.
        assert!((vol - PI).abs() < 5e-3, "{vol}");
        let g3 = grid(3, 10_000);
        let b3 = StarSet::from_convex(ConvexBody::unit_ball(3).scale(2.0), g3.clone()).unwrap();
        let vol = volume_star(&b3, &g3).unwrap();
        let exact = 8.0 * 4.0 * PI / 3.0;
        assert!((vol - exact).abs() / exact < 5e-3);
    }

    #[test]
    fn lattice_operations() {
        let g = grid(2, 64);
        let s1 = StarSet::from_convex(ConvexBody::from_points(&[&[-1.0, 0.0], &[1.0, 0.0]]).unwrap(), g.clone()).unwrap();
        let b = StarSet::from_convex(ConvexBody::unit_ball(2).scale(0.5), g.clone()).unwrap();
        let u = union(&[s1.clone(), b.clone()]).unwrap();
        let i = intersection(&[s1, b]).unwrap();
        assert_eq!(u.radial_at(&[1.0, 0.0]), 1.0);
        assert_eq!(u.radial_at(&[0.0, 1.0]), 0.5);
        assert_eq!(i.radial_at(&[1.0, 0.0]), 0.5);
        assert_eq!(i.radial_at(&[0.0, 1.0]), 0.0);
    }

    #[test]
    fn sampled_sets_reproduce_values_on_their_grid() {
        let g = grid(3, 500);
        let vals: Vec<f64> = (0..g.len()).map(|i| 1.0 + (i % 7) as f64 * 0.1).collect();
        let s = StarSet::radial_sampled(g.clone(), vals.clone()).unwrap();
        for (a, b) in radial_on_grid(&s, &g).iter().zip(&vals) {
            assert!((a - b).abs() < 1e-14);
        }
    }
}
