//! Radial p-sums of star sets and polar L_p sums of convex bodies.

use super::{lp_sum, LpVariant};
use crate::convex::{polar_body, ConvexBody, SupportOp};
use crate::error::{arg, domain, Result};
use crate::geometry::{norm, DirectionGrid};
use crate::star::{RadialOp, StarSet};
use std::sync::Arc;

/// Radial values at or below this count as zero in the negative-p branch.
const ZERO_RADIAL: f64 = 1e-14;

struct RadialSum {
    parts: [StarSet; 2],
    p: f64,
}

impl RadialOp for RadialSum {
    fn name(&self) -> String {
        format!("radial_sum({})", self.p)
    }
    fn dim(&self) -> usize {
        self.parts[0].dim()
    }
    fn radial(&self, x: &[f64]) -> f64 {
        let a = self.parts[0].radial_at(x);
        let b = self.parts[1].radial_at(x);
        let p = self.p;
        if p == f64::INFINITY {
            a.max(b)
        } else if p == f64::NEG_INFINITY {
            a.min(b)
        } else if p < 0.0 {
            if a <= ZERO_RADIAL || b <= ZERO_RADIAL {
                0.0
            } else {
                // (a^p + b^p)^{1/p} = lo·(1 + (hi/lo)^p)^{1/p}, stable for large |p|.
                let (lo, hi) = (a.min(b), a.max(b));
                lo * (1.0 + (hi / lo).powf(p)).powf(1.0 / p)
            }
        } else {
            let top = a.max(b);
            if top == 0.0 {
                0.0
            } else {
                top * ((a / top).powf(p) + (b / top).powf(p)).powf(1.0 / p)
            }
        }
    }
}

/// K +~_p L for p ∈ [−∞, ∞] \ {0}.
pub fn radial_p_sum(k: &StarSet, l: &StarSet, p: f64) -> Result<StarSet> {
    if k.dim() != l.dim() {
        return arg("radial_p_sum: dimension mismatch");
    }
    if p == 0.0 || p.is_nan() {
        return arg("radial_p_sum: p must be nonzero");
    }
    Ok(StarSet::from_op(Arc::new(RadialSum { parts: [k.clone(), l.clone()], p })))
}

/// (K° +_{−p} L°)° for p ≤ −1; o must be interior to both bodies.
pub fn polar_lp_sum(k: &ConvexBody, l: &ConvexBody, p: f64, grid: &Arc<DirectionGrid>) -> Result<ConvexBody> {
    if k.dim() != l.dim() {
        return arg("polar_lp_sum: dimension mismatch");
    }
    if p.is_nan() || p > -1.0 {
        return arg(format!("polar_lp_sum needs p ≤ −1, got {p}"));
    }
    for body in [k, l] {
        if !origin_interior(body, grid) {
            return domain("polar_lp_sum: o must be an interior point of both bodies");
        }
    }
    let sum = lp_sum(&polar_body(k, grid)?, &polar_body(l, grid)?, -p, LpVariant::Classic)?;
    polar_body(&sum, grid)
}

fn origin_interior(k: &ConvexBody, grid: &DirectionGrid) -> bool {
    if let Some(h) = k.as_vpolytope().and_then(|p| p.hull()) {
        return h.is_full_dim() && h.signed_distance(&vec![0.0; k.dim()]) < -1e-12 * h.scale().max(1.0);
    }
    grid.directions().iter().all(|u| k.support(u) > 1e-8)
}

/// The cylinder [−c·e₁, c·e₁] + r·D, D the unit ball of e₁^⊥.
struct Cylinder {
    n: usize,
    half_length: f64,
    radius: f64,
}

impl SupportOp for Cylinder {
    fn name(&self) -> String {
        "cylinder".into()
    }
    fn dim(&self) -> usize {
        self.n
    }
    fn support(&self, x: &[f64]) -> f64 {
        self.half_length * x[0].abs() + self.radius * norm(&x[1..])
    }
    fn radial_exact(&self, x: &[f64]) -> Option<f64> {
        Some(1.0 / (x[0].abs() / self.half_length).max(norm(&x[1..]) / self.radius))
    }
}

/// A spherical cylinder with axis e₁ (n ≥ 2).
pub fn cylinder(n: usize, half_length: f64, radius: f64) -> Result<ConvexBody> {
    if n < 2 || !(half_length > 0.0 && radius > 0.0) {
        return arg("cylinder needs n ≥ 2 and positive sizes");
    }
    Ok(ConvexBody::from_op(Arc::new(Cylinder { n, half_length, radius })))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convex::transform_body;
    use crate::geometry::{sphere_grid, LinearMap};
    use crate::star::{radial_distance, radial_on_grid};

    fn grid(n: usize, m: usize) -> Arc<DirectionGrid> {
        Arc::new(sphere_grid(n, m, 0).unwrap())
    }

    fn star(b: ConvexBody, g: &Arc<DirectionGrid>) -> StarSet {
        StarSet::from_convex(b, g.clone()).unwrap()
    }

    #[test]
    fn radial_sum_examples() {
        let g = grid(2, 256);
        let b = star(ConvexBody::unit_ball(2), &g);
        let b2 = star(ConvexBody::unit_ball(2).scale(2.0), &g);
        let s = radial_p_sum(&b, &b, 1.0).unwrap();
        assert!(radial_distance(&s, &b2, &g).unwrap() < 1e-14);
        let h = radial_p_sum(&b, &b2, -1.0).unwrap();
        for r in radial_on_grid(&h, &g) {
            assert!((r - 2.0 / 3.0).abs() < 1e-14);
        }
        assert!(radial_p_sum(&b, &b, 0.0).is_err());
    }

    #[test]
    fn infinite_p_is_union_and_intersection() {
        let g = grid(2, 256);
        let seg = star(ConvexBody::from_points(&[&[-2.0, 0.0], &[2.0, 0.0]]).unwrap(), &g);
        let b = star(ConvexBody::unit_ball(2), &g);
        let lo = radial_p_sum(&seg, &b, f64::NEG_INFINITY).unwrap();
        let hi = radial_p_sum(&seg, &b, f64::INFINITY).unwrap();
        for u in g.directions() {
            let (a, c) = (seg.radial_at(u), b.radial_at(u));
            assert_eq!(lo.radial_at(u), a.min(c));
            assert_eq!(hi.radial_at(u), a.max(c));
        }
        // Negative finite p vanishes wherever either set does.
        let neg = radial_p_sum(&seg, &b, -2.0).unwrap();
        assert_eq!(neg.radial_at(&[0.0, 1.0]), 0.0);
        assert!(neg.radial_at(&[1.0, 0.0]) > 0.0);
    }

    #[test]
    fn polar_sums_match_radial_sums() {
        let g = grid(2, 512);
        let b = ConvexBody::unit_ball(2);
        let r = polar_lp_sum(&b, &b, -1.0, &g).unwrap();
        for u in g.directions() {
            assert!((r.radial_exact(u).unwrap() - 0.5).abs() < 1e-14);
        }
        let e = transform_body(&b, &LinearMap::diagonal(&[2.0, 0.5]).unwrap()).unwrap();
        let k = ConvexBody::from_points(&[&[-1.0, -1.0], &[2.0, -0.5], &[0.5, 1.5]]).unwrap();
        for p in [-1.0, -2.5, f64::NEG_INFINITY] {
            let pol = polar_lp_sum(&e, &k, p, &g).unwrap();
            let rad = radial_p_sum(&star(e.clone(), &g), &star(k.clone(), &g), p).unwrap();
            for u in g.directions() {
                let a = pol.radial_exact(u).unwrap();
                assert!((a - rad.radial_at(u)).abs() < 1e-8);
            }
        }
        // K +_p K = 2^{1/p} K.
        let pol = polar_lp_sum(&k, &k, -3.0, &g).unwrap();
        for u in g.directions() {
            let want = 2f64.powf(-1.0 / 3.0) * k.radial_exact(u).unwrap();
            assert!((pol.radial_exact(u).unwrap() - want).abs() < 1e-12);
        }
    }

    #[test]
    fn polar_sum_needs_interior_origin() {
        let g = grid(2, 256);
        let k = ConvexBody::from_points(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]]).unwrap();
        assert!(matches!(polar_lp_sum(&k, &k, -1.0, &g), Err(crate::Error::Domain(_))));
        assert!(polar_lp_sum(&ConvexBody::unit_ball(2), &ConvexBody::unit_ball(2), 2.0, &g).is_err());
    }

    #[test]
    fn cylinder_radial_matches_support() {
        let c = cylinder(3, 1.0, 0.25).unwrap();
        let g = sphere_grid(3, 400, 0).unwrap();
        for u in g.directions().iter().take(40) {
            let r = c.radial_exact(u).unwrap();
            let x = u.scale(r);
            // x is on the boundary: its gauge-dual pairing reaches the support.
            let h = c.support(u);
            assert!(x.dot(u) <= h + 1e-12);
            assert!((x[0].abs() - 1.0).abs() < 1e-12 || (norm(&x.as_slice()[1..]) - 0.25).abs() < 1e-12);
        }
    }
}
