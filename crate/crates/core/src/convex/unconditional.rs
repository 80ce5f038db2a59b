use super::ConvexBody;
use crate::error::{arg, Result};
use crate::geometry::Vector;
use crate::hull::{enumerate_vertices, Hull};

/// The 1-unconditional hull X̂ of a polytope X: the union of the o-symmetric
/// coordinate boxes having a vertex in X.
#[derive(Clone, Debug)]
pub struct UnconditionalHull {
    /// conv(X̂), spanned by all sign changes of the vertices of X.
    pub hull: ConvexBody,
    /// Whether X̂ itself is convex.
    pub convex: bool,
    /// A point of conv(X̂) outside X̂ when X̂ is not convex.
    pub witness: Option<Vector>,
    source: Hull,
}

impl UnconditionalHull {
    /// y ∈ X̂ iff some x ∈ X has |x_i| ≥ |y_i| for every i.
    pub fn contains(&self, y: &[f64], tol: f64) -> bool {
        let m = y.len();
        let base = self.source.halfspaces();
        (0..1usize << m).any(|mask| {
            let mut hs = base.clone();
            for i in 0..m {
                let sign = if mask >> i & 1 == 1 { -1.0 } else { 1.0 };
                let mut a = vec![0.0; m];
                a[i] = -sign;
                hs.push((a, -y[i].abs()));
            }
            !enumerate_vertices(m, &hs, tol).is_empty()
        })
    }
}

/// Computes conv(X̂) and tests convexity of X̂ by checking points on chords
/// between vertices of conv(X̂) for membership in X̂.
pub fn unconditional_hull(x: &ConvexBody) -> Result<UnconditionalHull> {
    let Some(p) = x.as_vpolytope() else {
        return arg("unconditional_hull: a polytope is required");
    };
    let m = p.dim();
    if m > 3 {
        return arg("unconditional_hull: implemented for dimension ≤ 3");
    }
    let mut pts = Vec::new();
    for v in p.vertices() {
        for mask in 0..1usize << m {
            pts.push(Vector::raw(
                (0..m)
                    .map(|i| if mask >> i & 1 == 1 { -v[i].abs() } else { v[i].abs() })
                    .collect(),
            ));
        }
    }
    let hull = ConvexBody::vpolytope(pts)?;
    let mut out = UnconditionalHull {
        hull: hull.clone(),
        convex: true,
        witness: None,
        source: p.hull().expect("hull for n ≤ 3").clone(),
    };
    let verts = hull.as_vpolytope().unwrap().vertices().to_vec();
    let fractions = [0.5, 0.25, 0.75, 0.125, 0.375, 0.625, 0.875];
    let tol = 1e-9 * (1.0 + out.source.scale());
    let mut failures: Vec<Vector> = Vec::new();
    for &f in &fractions {
        for i in 0..verts.len() {
            for j in i + 1..verts.len() {
                let y: Vec<f64> = (0..m).map(|k| (1.0 - f) * verts[i][k] + f * verts[j][k]).collect();
                if !out.contains(&y, tol) {
                    failures.push(Vector::raw(y));
                }
            }
        }
        if !failures.is_empty() {
            break;
        }
    }
    if !failures.is_empty() {
        out.convex = false;
        let positive = failures.iter().find(|y| y.iter().all(|c| *c >= 0.0)).cloned();
        out.witness = positive.or_else(|| failures.first().cloned());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rhombus_has_nonconvex_hat() {
        let m = ConvexBody::from_points(&[&[2.0, 1.0], &[-2.0, -1.0], &[-1.0, 2.0], &[1.0, -2.0]]).unwrap();
        let u = unconditional_hull(&m).unwrap();
        assert!(!u.convex);
        for y in [[2.0, 1.0], [-2.0, 1.0], [1.0, 2.0], [-1.0, -2.0]] {
            assert!(u.contains(&y, 1e-9));
        }
        let w = u.witness.unwrap();
        assert!((w[0] - 1.5).abs() < 1e-12 && (w[1] - 1.5).abs() < 1e-12);
    }

    #[test]
    fn boxes_and_cross_polytopes_are_convex() {
        let sq = ConvexBody::cube(2, 1.0);
        assert!(unconditional_hull(&sq).unwrap().convex);
        let l1 = ConvexBody::from_points(&[&[1.0, 0.0], &[0.0, 1.0], &[-1.0, 0.0], &[0.0, -1.0]]).unwrap();
        assert!(unconditional_hull(&l1).unwrap().convex);
        // The simplex conv{e1, e2} has the cross-polytope as its hat.
        let seg = ConvexBody::from_points(&[&[1.0, 0.0], &[0.0, 1.0]]).unwrap();
        let u = unconditional_hull(&seg).unwrap();
        assert!(u.convex);
        assert!(u.contains(&[-0.5, 0.5], 1e-12));
        assert!(!u.contains(&[0.6, 0.6], 1e-12));
    }
}
