//! Seeded generators for random polytopes, set pairs and linear maps.

use super::{Domain, GridCache, SetValue};
use crate::convex::ConvexBody;
use crate::error::{arg, Result};
use crate::geometry::{LinearMap, Vector};
use crate::star::StarSet;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

/// How the random point cloud is post-processed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolytopeKind {
    /// Raw points: o may lie outside.
    General,
    /// Points shifted so their mean is o, which puts o inside the hull.
    Origin,
    /// The point set together with its reflection.
    Symmetric,
}

fn unit_ball_point<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let g: Vec<f64> = (0..n).map(|_| StandardNormal.sample(rng)).collect();
        let r = g.iter().map(|x| x * x).sum::<f64>().sqrt();
        if r > 1e-12 {
            let radius = rng.random::<f64>().powf(1.0 / n as f64);
            return g.iter().map(|x| x * radius / r).collect();
        }
    }
}

/// Hull of k ∈ [4, 12] uniform points of the unit ball. Draws are repeated
/// until the hull is full-dimensional.
pub fn random_polytope<R: Rng + ?Sized>(n: usize, kind: PolytopeKind, rng: &mut R) -> Result<ConvexBody> {
    if !(1..=3).contains(&n) {
        return arg("random_polytope supports n ≤ 3");
    }
    loop {
        let k = rng.random_range(4..=12usize);
        let mut pts: Vec<Vec<f64>> = (0..k).map(|_| unit_ball_point(n, rng)).collect();
        match kind {
            PolytopeKind::General => {}
            PolytopeKind::Origin => {
                let mean: Vec<f64> = (0..n).map(|i| pts.iter().map(|p| p[i]).sum::<f64>() / k as f64).collect();
                for p in &mut pts {
                    for i in 0..n {
                        p[i] -= mean[i];
                    }
                }
            }
            PolytopeKind::Symmetric => {
                let neg: Vec<Vec<f64>> = pts.iter().map(|p| p.iter().map(|x| -x).collect()).collect();
                pts.extend(neg);
            }
        }
        let body = ConvexBody::vpolytope(pts.into_iter().map(Vector::raw).collect())?;
        let full = body.as_vpolytope().and_then(|p| p.hull()).is_some_and(|h| h.is_full_dim() && h.volume() > 1e-3);
        if full {
            return Ok(body);
        }
    }
}

/// A random member of the domain in dimension n.
pub fn random_set<R: Rng + ?Sized>(domain: Domain, n: usize, rng: &mut R, grids: &GridCache) -> Result<SetValue> {
    Ok(match domain {
        Domain::ConvexSymmetric => SetValue::Convex(random_polytope(n, PolytopeKind::Symmetric, rng)?),
        Domain::ConvexOrigin => SetValue::Convex(random_polytope(n, PolytopeKind::Origin, rng)?),
        Domain::ConvexAll => SetValue::Convex(random_polytope(n, PolytopeKind::General, rng)?),
        Domain::StarSymmetric => {
            SetValue::Star(StarSet::from_convex(random_polytope(n, PolytopeKind::Symmetric, rng)?, grids.get(n))?)
        }
        Domain::StarAll => {
            SetValue::Star(StarSet::from_convex(random_polytope(n, PolytopeKind::Origin, rng)?, grids.get(n))?)
        }
        Domain::Interval1d => {
            let a: f64 = rng.random_range(-1.0..1.0);
            let b: f64 = rng.random_range(-1.0..1.0);
            SetValue::Convex(ConvexBody::from_points(&[&[a.min(b)], &[a.max(b) + 0.1]])?)
        }
    })
}

pub fn random_pair<R: Rng + ?Sized>(
    domain: Domain,
    n: usize,
    rng: &mut R,
    grids: &GridCache,
) -> Result<(SetValue, SetValue)> {
    Ok((random_set(domain, n, rng, grids)?, random_set(domain, n, rng, grids)?))
}

/// R·D·S: a rotation in a random coordinate plane, an anisotropic scaling with
/// factors in [e^{−1/2}, e^{1/2}], and a shear with one entry in [−1/2, 1/2].
pub fn random_linear_map<R: Rng + ?Sized>(n: usize, rng: &mut R) -> LinearMap {
    if n == 1 {
        let s: f64 = rng.random_range(-0.5..0.5);
        return LinearMap::diagonal(&[s.exp()]).expect("nonzero scale");
    }
    let i = rng.random_range(0..n);
    let j = (i + rng.random_range(1..n)) % n;
    let rot = LinearMap::rotation(n, i, j, rng.random_range(0.0..std::f64::consts::TAU));
    let d: Vec<f64> = (0..n).map(|_| rng.random_range(-0.5f64..0.5).exp()).collect();
    let diag = LinearMap::diagonal(&d).expect("positive diagonal");
    let mut shear = vec![0.0; n * n];
    for k in 0..n {
        shear[k * n + k] = 1.0;
    }
    let a = rng.random_range(0..n);
    let b = (a + rng.random_range(1..n)) % n;
    shear[a * n + b] = rng.random_range(-0.5..0.5);
    let shear = LinearMap::new(n, shear).expect("unit triangular shear");
    rot.compose(&diag).compose(&shear)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convex::support_on_grid;
    use crate::geometry::sphere_grid;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generator_is_reproducible() {
        let g = sphere_grid(3, 200, 0).unwrap();
        let a = random_polytope(3, PolytopeKind::General, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let b = random_polytope(3, PolytopeKind::General, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        assert_eq!(support_on_grid(&a, &g), support_on_grid(&b, &g));
    }

    proptest! {
        #[test]
        fn kinds_have_their_defining_property(seed in 0u64..500, n in 1usize..=3) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = sphere_grid(n, 64, 0).unwrap();
            let s = random_polytope(n, PolytopeKind::Symmetric, &mut rng).unwrap();
            let h = support_on_grid(&s, &g);
            for i in 0..g.len() {
                prop_assert!((h[i] - h[g.antipode(i)]).abs() < 1e-12);
            }
            let o = random_polytope(n, PolytopeKind::Origin, &mut rng).unwrap();
            prop_assert!(support_on_grid(&o, &g).iter().all(|v| *v >= 0.0));
            for v in s.as_vpolytope().unwrap().vertices() {
                prop_assert!(v.norm() <= 1.0 + 1e-12);
            }
        }

        #[test]
        fn random_maps_are_well_conditioned(seed in 0u64..500, n in 1usize..=3) {
            let phi = random_linear_map(n, &mut ChaCha8Rng::seed_from_u64(seed));
            prop_assert!(phi.is_invertible());
            prop_assert!(phi.condition() < 50.0);
        }
    }
}
