//! Binary and m-ary operations on convex bodies and star sets.

mod blaschke;
mod mset;
mod radial;
mod symmetral;

pub use blaschke::{blaschke_sum, minkowski_solve, minkowski_solve_with, surface_area_measure, SurfaceAreaMeasure};
pub use mset::{
    lp_sum_lyz, m_combine, m_combine_sampled, m_support_monotone, MCombination, MSet, SampledUnion,
};
pub use radial::{cylinder, polar_lp_sum, radial_p_sum};
pub use symmetral::{symmetrize_convex, symmetrize_star, Symmetral};

use crate::convex::{ConvexBody, MinkowskiNode, SupportOp};
use crate::error::{arg, domain, Result};
use crate::geometry::{sphere_grid, DirectionGrid, Vector};
use std::sync::Arc;

/// Which support formula an L_p sum uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpVariant {
    /// h^p = h_K^p + h_L^p, for bodies containing o.
    Classic,
    /// h^p = max(h_K,0)^p + max(h_L,0)^p, for arbitrary bodies.
    Extended,
}

/// K + L. Two polytopes give the hull of pairwise vertex sums.
pub fn minkowski_sum(k: &ConvexBody, l: &ConvexBody) -> Result<ConvexBody> {
    if k.dim() != l.dim() {
        return arg("minkowski_sum: dimension mismatch");
    }
    if let (Some(p), Some(q)) = (k.as_vpolytope(), l.as_vpolytope()) {
        let mut pts = Vec::with_capacity(p.vertices().len() * q.vertices().len());
        for a in p.vertices() {
            for b in q.vertices() {
                pts.push(a.add(b));
            }
        }
        return ConvexBody::vpolytope(pts);
    }
    Ok(ConvexBody::from_op(Arc::new(MinkowskiNode(vec![k.clone(), l.clone()]))))
}

struct LpNode {
    bodies: Vec<ConvexBody>,
    p: f64,
    variant: LpVariant,
}

impl SupportOp for LpNode {
    fn name(&self) -> String {
        format!("lp({}, {:?})", self.p, self.variant)
    }
    fn dim(&self) -> usize {
        self.bodies[0].dim()
    }
    fn support(&self, x: &[f64]) -> f64 {
        // Classic inputs contain o, so negative values are rounding noise.
        let vals = self.bodies.iter().map(|k| k.support(x).max(0.0));
        if self.p.is_infinite() {
            vals.fold(0.0, f64::max)
        } else {
            // Factor out the largest term to avoid overflow for large p.
            let v: Vec<f64> = vals.collect();
            let top = v.iter().copied().fold(0.0, f64::max);
            if top == 0.0 {
                return 0.0;
            }
            top * v.iter().map(|h| (h / top).powf(self.p)).sum::<f64>().powf(1.0 / self.p)
        }
    }
}

/// K +_p L for p ∈ [1, ∞]. The classic variant needs o ∈ K and o ∈ L.
pub fn lp_sum(k: &ConvexBody, l: &ConvexBody, p: f64, variant: LpVariant) -> Result<ConvexBody> {
    if k.dim() != l.dim() {
        return arg("lp_sum: dimension mismatch");
    }
    if p.is_nan() || p < 1.0 {
        return arg(format!("lp_sum: p must lie in [1, inf], got {p}"));
    }
    if variant == LpVariant::Classic {
        for body in [k, l] {
            if let Some(u) = origin_violation(body) {
                return domain(format!(
                    "lp_sum: classic variant needs o in both bodies; support is negative at {:?}",
                    u.as_slice()
                ));
            }
        }
        if p == 1.0 {
            return minkowski_sum(k, l);
        }
    }
    Ok(ConvexBody::from_op(Arc::new(LpNode { bodies: vec![k.clone(), l.clone()], p, variant })))
}

/// Directions used when a property can only be checked by sampling.
pub(crate) fn check_grid(n: usize) -> DirectionGrid {
    let res = match n {
        1 => 2,
        2 => 720,
        3 => 4000,
        _ => 20_000,
    };
    sphere_grid(n, res, 0).expect("check grid")
}

/// A direction u with h_K(u) < 0 when o ∉ K, exact for polytopes and balls.
pub(crate) fn origin_violation(k: &ConvexBody) -> Option<Vector> {
    let n = k.dim();
    if let Some(h) = k.as_vpolytope().and_then(|p| p.hull()) {
        let tol = 1e-12 * h.scale().max(1.0);
        let o = vec![0.0; n];
        if h.signed_distance(&o) <= tol {
            return None;
        }
        // The most violated half-space normal has negative support.
        let best = h
            .halfspaces()
            .into_iter()
            .filter(|(a, b)| *b < -tol && a.iter().any(|c| *c != 0.0))
            .max_by(|x, y| (-x.1).partial_cmp(&-y.1).unwrap());
        if let Some((a, _)) = best {
            return Vector::raw(a).normalized();
        }
    }
    let grid = check_grid(n);
    let scale = grid.directions().iter().map(|u| k.support(u).abs()).fold(0.0, f64::max).max(1.0);
    grid.directions().iter().find(|u| k.support(u) < -1e-12 * scale).cloned()
}

pub(crate) fn contains_origin(k: &ConvexBody) -> bool {
    origin_violation(k).is_none()
}

/// Whether K = −K: exact for polytopes, otherwise checked on a grid.
pub(crate) fn is_symmetric(k: &ConvexBody) -> bool {
    if let Some(p) = k.as_vpolytope() {
        let scale = p.vertices().iter().map(|v| v.norm()).fold(1.0, f64::max);
        return p
            .vertices()
            .iter()
            .all(|v| p.vertices().iter().any(|w| v.add(w).norm() <= 1e-9 * scale));
    }
    let grid = check_grid(k.dim());
    let dirs = grid.directions();
    let scale = dirs.iter().map(|u| k.support(u).abs()).fold(0.0, f64::max).max(1.0);
    dirs.iter().all(|u| (k.support(u) - k.support(&u.neg())).abs() <= 1e-9 * scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convex::support_on_grid;

    fn grid(n: usize) -> DirectionGrid {
        sphere_grid(n, 256, 0).unwrap()
    }

    #[test]
    fn minkowski_examples() {
        let g = grid(2);
        let k = ConvexBody::from_points(&[&[0.0, 0.0], &[1.0, 0.0], &[1.0, 1.0], &[0.0, 1.0]]).unwrap();
        let s = minkowski_sum(&k, &ConvexBody::origin(2)).unwrap();
        assert_eq!(support_on_grid(&s, &g), support_on_grid(&k, &g));
        let s = minkowski_sum(&k, &k).unwrap();
        let mut vs: Vec<Vec<f64>> = s.as_vpolytope().unwrap().vertices().iter().map(|v| v.to_vec()).collect();
        vs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(vs, vec![vec![0.0, 0.0], vec![0.0, 2.0], vec![2.0, 0.0], vec![2.0, 2.0]]);
        // Difference body of a triangle is a hexagon.
        let t = ConvexBody::from_points(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]]).unwrap();
        let d = minkowski_sum(&t, &t.reflect()).unwrap();
        let v = d.as_vpolytope().unwrap().vertices();
        assert_eq!(v.len(), 6);
        for w in [[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0], [1.0, -1.0], [-1.0, 1.0]] {
            assert!(v.iter().any(|x| x[0] == w[0] && x[1] == w[1]));
        }
    }

    #[test]
    fn lp_examples() {
        let g = grid(3);
        let b = ConvexBody::unit_ball(3);
        for p in [1.0, 2.0, 3.5, f64::INFINITY] {
            let s = lp_sum(&b, &b, p, LpVariant::Classic).unwrap();
            let want = 2f64.powf(1.0 / p);
            for h in support_on_grid(&s, &g) {
                assert!((h - want).abs() < 1e-14);
            }
        }
        let g = grid(2);
        let s1 = ConvexBody::from_points(&[&[-1.0, 0.0], &[1.0, 0.0]]).unwrap();
        let s2 = ConvexBody::from_points(&[&[0.0, -1.0], &[0.0, 1.0]]).unwrap();
        let d = lp_sum(&s1, &s2, 2.0, LpVariant::Classic).unwrap();
        for u in g.directions() {
            assert!((d.support(u) - 1.0).abs() < 1e-14);
        }
        let e1 = ConvexBody::from_points(&[&[1.0, 0.0]]).unwrap();
        let ext = lp_sum(&e1, &ConvexBody::origin(2), 3.0, LpVariant::Extended).unwrap();
        for u in g.directions() {
            assert!((ext.support(u) - u[0].max(0.0)).abs() < 1e-14);
        }
    }

    #[test]
    fn lp_classic_rejects_bodies_missing_the_origin() {
        let k = ConvexBody::from_points(&[&[1.0, 0.0], &[2.0, 0.0], &[1.0, 1.0]]).unwrap();
        match lp_sum(&k, &ConvexBody::unit_ball(2), 2.0, LpVariant::Classic) {
            Err(crate::Error::Domain(msg)) => assert!(msg.contains("negative")),
            other => panic!("{other:?}"),
        }
        let far = ConvexBody::ball(Vector::new(vec![3.0, 0.0]).unwrap(), 1.0).unwrap();
        assert!(lp_sum(&far, &far, 2.0, LpVariant::Classic).is_err());
        assert!(lp_sum(&far, &far, 2.0, LpVariant::Extended).is_ok());
        assert!(lp_sum(&far, &far, 0.5, LpVariant::Extended).is_err());
    }

    #[test]
    fn lp_sums_decrease_in_p() {
        let g = grid(2);
        let k = ConvexBody::from_points(&[&[-0.5, -0.2], &[1.0, 0.0], &[0.3, 1.2]]).unwrap();
        let l = ConvexBody::unit_ball(2).scale(0.7);
        let ps = [1.0, 1.5, 2.0, 4.0, f64::INFINITY];
        let sums: Vec<Vec<f64>> = ps
            .iter()
            .map(|&p| support_on_grid(&lp_sum(&k, &l, p, LpVariant::Classic).unwrap(), &g))
            .collect();
        for w in sums.windows(2) {
            for (a, b) in w[0].iter().zip(&w[1]) {
                assert!(b <= &(a + 1e-14));
            }
        }
    }

    #[test]
    fn symmetry_detection() {
        assert!(is_symmetric(&ConvexBody::cube(3, 1.0)));
        assert!(!is_symmetric(&ConvexBody::from_points(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]]).unwrap()));
        assert!(is_symmetric(&ConvexBody::unit_ball(2).scale(2.0)));
        assert!(contains_origin(&ConvexBody::cube(2, 1.0)));
    }
}
