//! Surface area measures of polytopes, a discrete Minkowski-problem solver and
//! Blaschke addition built on them.

use crate::convex::ConvexBody;
use crate::error::{arg, domain, Error, Result};
use crate::geometry::{dot, norm, Vector};
use crate::hull::enumerate_vertices;
use nalgebra::{DMatrix, DVector, SymmetricEigen};

/// Normals closer than this are the same atom.
const NORMAL_TOL: f64 = 1e-10;
/// Allowed |Σ Fᵢuᵢ| relative to the total mass.
const CLOSURE_TOL: f64 = 1e-8;
/// Relative facet-area accuracy of [`minkowski_solve`].
const AREA_TOL: f64 = 1e-6;

/// A finite discrete measure on the sphere: atoms (unit normal, area).
#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceAreaMeasure {
    dim: usize,
    atoms: Vec<(Vector, f64)>,
}

impl SurfaceAreaMeasure {
    /// Normalizes the normals; rejects nonpositive areas and repeated normals.
    pub fn new(dim: usize, atoms: Vec<(Vector, f64)>) -> Result<Self> {
        let atoms = Self::validate(dim, atoms)?;
        for i in 0..atoms.len() {
            for j in i + 1..atoms.len() {
                if norm(&atoms[i].0.sub(&atoms[j].0)) <= NORMAL_TOL {
                    return arg("surface area measure: repeated normal");
                }
            }
        }
        Ok(SurfaceAreaMeasure { dim, atoms })
    }

    /// Like [`SurfaceAreaMeasure::new`] but adds the areas of coincident normals.
    pub fn pooled(dim: usize, atoms: Vec<(Vector, f64)>) -> Result<Self> {
        let atoms = Self::validate(dim, atoms)?;
        let mut out: Vec<(Vector, f64)> = Vec::new();
        for (u, f) in atoms {
            match out.iter_mut().find(|(w, _)| norm(&w.sub(&u)) <= NORMAL_TOL) {
                Some(slot) => slot.1 += f,
                None => out.push((u, f)),
            }
        }
        Ok(SurfaceAreaMeasure { dim, atoms: out })
    }

    fn validate(dim: usize, atoms: Vec<(Vector, f64)>) -> Result<Vec<(Vector, f64)>> {
        if atoms.is_empty() {
            return arg("surface area measure: no atoms");
        }
        atoms
            .into_iter()
            .map(|(u, f)| {
                if u.dim() != dim {
                    return arg("surface area measure: normal has the wrong dimension");
                }
                if !(f > 0.0 && f.is_finite()) {
                    return arg("surface area measure: areas must be positive");
                }
                match u.normalized() {
                    Some(n) => Ok((n, f)),
                    None => arg("surface area measure: zero normal"),
                }
            })
            .collect()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn atoms(&self) -> &[(Vector, f64)] {
        &self.atoms
    }

    pub fn total(&self) -> f64 {
        self.atoms.iter().map(|a| a.1).sum()
    }

    /// |Σ Fᵢuᵢ|, zero for the surface area measure of a polytope.
    pub fn closure_defect(&self) -> f64 {
        let mut s = vec![0.0; self.dim];
        for (u, f) in &self.atoms {
            for i in 0..self.dim {
                s[i] += f * u[i];
            }
        }
        norm(&s)
    }

    /// The sum of two measures with coincident normals pooled.
    pub fn merge(&self, other: &SurfaceAreaMeasure) -> Result<SurfaceAreaMeasure> {
        if self.dim != other.dim {
            return arg("surface area measures of different dimensions");
        }
        SurfaceAreaMeasure::pooled(self.dim, self.atoms.iter().chain(&other.atoms).cloned().collect())
    }

    /// Area of the atom with normal u (0 when absent).
    pub fn mass_at(&self, u: &[f64]) -> f64 {
        let r = norm(u);
        self.atoms
            .iter()
            .filter(|(w, _)| w.iter().zip(u).map(|(a, b)| (a - b / r).powi(2)).sum::<f64>().sqrt() <= 1e-7)
            .map(|a| a.1)
            .sum()
    }
}

/// Facet normals and facet areas of a full-dimensional polytope, n ∈ {2, 3}.
pub fn surface_area_measure(p: &ConvexBody) -> Result<SurfaceAreaMeasure> {
    let n = p.dim();
    if !(2..=3).contains(&n) {
        return arg("surface_area_measure: implemented for n = 2, 3");
    }
    let Some(poly) = p.as_vpolytope() else {
        return arg("surface_area_measure: a polytope is required");
    };
    let hull = poly.hull().expect("hull for n ≤ 3");
    if !hull.is_full_dim() {
        return domain("surface_area_measure: polytope is not full-dimensional");
    }
    SurfaceAreaMeasure::pooled(n, hull.facets().into_iter().map(|f| (f.normal, f.area)).collect())
}

/// The polytope with centroid o whose surface area measure is μ (n ∈ {2, 3}).
pub fn minkowski_solve(mu: &SurfaceAreaMeasure) -> Result<ConvexBody> {
    minkowski_solve_with(mu, 500)
}

/// [`minkowski_solve`] with an explicit iteration cap for the n = 3 solver.
pub fn minkowski_solve_with(mu: &SurfaceAreaMeasure, max_iter: usize) -> Result<ConvexBody> {
    let n = mu.dim();
    if !(2..=3).contains(&n) {
        return arg("minkowski_solve: implemented for n = 2, 3");
    }
    if mu.closure_defect() > CLOSURE_TOL * mu.total().max(1.0) {
        return arg(format!("minkowski_solve: measure is not closed (|Σ F u| = {:e})", mu.closure_defect()));
    }
    let mut gram = DMatrix::<f64>::zeros(n, n);
    for (u, _) in mu.atoms() {
        let v = DVector::from_column_slice(u);
        gram += &v * v.transpose();
    }
    let min_eig = SymmetricEigen::new(gram).eigenvalues.min();
    if min_eig <= 1e-12 {
        return arg("minkowski_solve: normals do not span the space");
    }
    let body = if n == 2 { solve_planar(mu)? } else { solve_spatial(mu, max_iter)? };
    center(body)
}

fn center(body: ConvexBody) -> Result<ConvexBody> {
    let c = body.as_vpolytope().and_then(|p| p.hull()).and_then(|h| h.centroid());
    match c {
        Some(c) => Ok(body.translate(&c.neg())),
        None => domain("minkowski_solve: degenerate solution"),
    }
}

/// Edges of length Fᵢ along the normals' tangents, chained by angle.
fn solve_planar(mu: &SurfaceAreaMeasure) -> Result<ConvexBody> {
    let mut atoms = mu.atoms().to_vec();
    atoms.sort_by(|a, b| a.0[1].atan2(a.0[0]).partial_cmp(&b.0[1].atan2(b.0[0])).unwrap());
    let mut pts = Vec::with_capacity(atoms.len());
    let mut cur = [0.0, 0.0];
    for (u, f) in &atoms {
        pts.push(Vector::raw(cur.to_vec()));
        cur[0] -= f * u[1];
        cur[1] += f * u[0];
    }
    ConvexBody::vpolytope(pts)
}

/// Geometry of {x : uᵢ·x ≤ hᵢ} in R³ needed by the solver.
struct Cell {
    volume: f64,
    areas: Vec<f64>,
    /// ∂Aᵢ/∂hⱼ.
    hess: DMatrix<f64>,
    vertices: Vec<Vec<f64>>,
}

fn cell(normals: &[Vector], h: &[f64]) -> Option<Cell> {
    let m = normals.len();
    let scale = h.iter().map(|x| x.abs()).fold(0.0, f64::max).max(1e-300);
    let hs: Vec<(Vec<f64>, f64)> = normals.iter().zip(h).map(|(u, &b)| (u.to_vec(), b)).collect();
    let verts = enumerate_vertices(3, &hs, 1e-11 * scale);
    if verts.len() < 4 {
        return None;
    }
    let mut on_facet: Vec<Vec<usize>> = vec![Vec::new(); m];
    for (k, v) in verts.iter().enumerate() {
        for &i in &v.tight {
            on_facet[i].push(k);
        }
    }
    let mut areas = vec![0.0; m];
    for i in 0..m {
        let ids = &on_facet[i];
        if ids.len() < 3 {
            continue;
        }
        let (e1, e2) = plane_basis(&normals[i]);
        let pts: Vec<[f64; 2]> = ids.iter().map(|&k| [dot(&verts[k].point, &e1), dot(&verts[k].point, &e2)]).collect();
        let c = pts.iter().fold([0.0, 0.0], |a, p| [a[0] + p[0], a[1] + p[1]]);
        let c = [c[0] / pts.len() as f64, c[1] / pts.len() as f64];
        let mut order: Vec<usize> = (0..pts.len()).collect();
        order.sort_by(|&a, &b| {
            let ta = (pts[a][1] - c[1]).atan2(pts[a][0] - c[0]);
            let tb = (pts[b][1] - c[1]).atan2(pts[b][0] - c[0]);
            ta.partial_cmp(&tb).unwrap()
        });
        let mut s = 0.0;
        for k in 0..order.len() {
            let (p, q) = (pts[order[k]], pts[order[(k + 1) % order.len()]]);
            s += p[0] * q[1] - q[0] * p[1];
        }
        areas[i] = 0.5 * s.abs();
    }
    let mut hess = DMatrix::<f64>::zeros(m, m);
    for i in 0..m {
        for j in i + 1..m {
            let common: Vec<usize> = on_facet[i].iter().filter(|k| on_facet[j].contains(k)).copied().collect();
            if common.len() < 2 {
                continue;
            }
            let mut len: f64 = 0.0;
            for a in 0..common.len() {
                for b in a + 1..common.len() {
                    let d: Vec<f64> =
                        verts[common[a]].point.iter().zip(&verts[common[b]].point).map(|(x, y)| x - y).collect();
                    len = len.max(norm(&d));
                }
            }
            let cos = dot(&normals[i], &normals[j]);
            let sin = (1.0 - cos * cos).max(0.0).sqrt();
            if sin < 1e-12 {
                continue;
            }
            hess[(i, j)] = len / sin;
            hess[(j, i)] = len / sin;
            hess[(i, i)] -= len * cos / sin;
            hess[(j, j)] -= len * cos / sin;
        }
    }
    let volume = areas.iter().zip(h).map(|(a, b)| a * b).sum::<f64>() / 3.0;
    if volume <= 0.0 {
        return None;
    }
    Some(Cell { volume, areas, hess, vertices: verts.into_iter().map(|v| v.point).collect() })
}

fn plane_basis(u: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let pick = if u[0].abs() < 0.6 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let d = dot(&pick, u);
    let a: Vec<f64> = (0..3).map(|i| pick[i] - d * u[i]).collect();
    let na = norm(&a);
    let a: Vec<f64> = a.iter().map(|x| x / na).collect();
    let b = vec![u[1] * a[2] - u[2] * a[1], u[2] * a[0] - u[0] * a[2], u[0] * a[1] - u[1] * a[0]];
    (a, b)
}

/// max_i |Aᵢ/λ − Fᵢ| / max F with λ = ΣA/ΣF.
fn area_residual(areas: &[f64], target: &[f64]) -> f64 {
    let lambda = areas.iter().sum::<f64>() / target.iter().sum::<f64>();
    let top = target.iter().copied().fold(0.0, f64::max);
    areas.iter().zip(target).map(|(a, f)| (a / lambda - f).abs()).fold(0.0, f64::max) / top
}

/// Maximizes (1/3)·ln V(h) on the hyperplane F·h = 1 by damped Newton steps.
/// The maximizer has facet areas proportional to F; it is then rescaled.
fn solve_spatial(mu: &SurfaceAreaMeasure, max_iter: usize) -> Result<ConvexBody> {
    let normals: Vec<Vector> = mu.atoms().iter().map(|a| a.0.clone()).collect();
    let target: Vec<f64> = mu.atoms().iter().map(|a| a.1).collect();
    let m = normals.len();
    let total: f64 = target.iter().sum();
    let mut h = vec![1.0 / total; m];
    let phi = |c: &Cell| c.volume.ln() / 3.0;
    let mut cur = cell(&normals, &h).ok_or_else(|| Error::Domain("minkowski_solve: degenerate start".into()))?;
    let mut mu_reg = 1e-10;
    let mut residual = area_residual(&cur.areas, &target);
    for _ in 0..max_iter {
        if residual <= 1e-3 * AREA_TOL {
            break;
        }
        let v = cur.volume;
        let grad = DVector::from_iterator(m, cur.areas.iter().map(|a| a / (3.0 * v)));
        let a = DVector::from_column_slice(&cur.areas);
        let hess = &cur.hess / (3.0 * v) - (&a * a.transpose()) / (3.0 * v * v);
        let scale = hess.diagonal().abs().max().max(1e-300);
        let mut improved = false;
        for _ in 0..12 {
            let mut kkt = DMatrix::<f64>::zeros(m + 1, m + 1);
            kkt.view_mut((0, 0), (m, m)).copy_from(&(-&hess));
            for i in 0..m {
                kkt[(i, i)] += mu_reg * scale;
                kkt[(i, m)] = target[i];
                kkt[(m, i)] = target[i];
            }
            let mut rhs = DVector::<f64>::zeros(m + 1);
            rhs.rows_mut(0, m).copy_from(&grad);
            let Some(sol) = kkt.lu().solve(&rhs) else {
                mu_reg *= 10.0;
                continue;
            };
            let d: Vec<f64> = (0..m).map(|i| sol[i]).collect();
            let slope: f64 = d.iter().zip(grad.iter()).map(|(x, g)| x * g).sum();
            let mut step = 1.0;
            while step > 1e-8 {
                let trial: Vec<f64> = h.iter().zip(&d).map(|(x, y)| x + step * y).collect();
                if let Some(c) = cell(&normals, &trial) {
                    let r = area_residual(&c.areas, &target);
                    if phi(&c) >= phi(&cur) + 1e-4 * step * slope || r < residual {
                        h = trial;
                        cur = c;
                        residual = r;
                        improved = true;
                        break;
                    }
                }
                step *= 0.5;
            }
            if improved {
                mu_reg = (mu_reg * 0.1).max(1e-14);
                break;
            }
            mu_reg *= 10.0;
        }
        if !improved {
            break;
        }
    }
    if residual > AREA_TOL {
        return Err(Error::Convergence {
            message: "minkowski_solve: facet areas did not converge".into(),
            residual,
        });
    }
    let lambda = cur.areas.iter().sum::<f64>() / total;
    let t = lambda.powf(-0.5);
    ConvexBody::vpolytope(cur.vertices.iter().map(|p| Vector::raw(p.iter().map(|x| x * t).collect())).collect())
}

/// K ♯ L: the polytope with centroid o and measure S(K,·) + S(L,·).
pub fn blaschke_sum(p: &ConvexBody, q: &ConvexBody) -> Result<ConvexBody> {
    if p.dim() != q.dim() {
        return arg("blaschke_sum: dimension mismatch");
    }
    let mu = surface_area_measure(p)?.merge(&surface_area_measure(q)?)?;
    minkowski_solve(&mu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convex::hausdorff_distance;
    use crate::geometry::{sphere_grid, LinearMap};
    use crate::operations::minkowski_sum;

    fn v(c: &[f64]) -> Vector {
        Vector::new(c.to_vec()).unwrap()
    }

    fn boxed(lo: &[f64], hi: &[f64]) -> ConvexBody {
        let n = lo.len();
        let pts = (0..1usize << n)
            .map(|mask| v(&(0..n).map(|i| if mask >> i & 1 == 1 { hi[i] } else { lo[i] }).collect::<Vec<_>>()))
            .collect();
        ConvexBody::vpolytope(pts).unwrap()
    }

    fn axis_measure(n: usize, masses: &[f64]) -> SurfaceAreaMeasure {
        let mut atoms = Vec::new();
        for i in 0..n {
            atoms.push((Vector::basis(n, i), masses[i]));
            atoms.push((Vector::basis(n, i).neg(), masses[i]));
        }
        SurfaceAreaMeasure::new(n, atoms).unwrap()
    }

    fn half_widths(b: &ConvexBody) -> Vec<f64> {
        (0..b.dim()).map(|i| b.support(&Vector::basis(b.dim(), i))).collect()
    }

    #[test]
    fn measures_of_boxes() {
        let cube = boxed(&[0.0; 3], &[1.0; 3]);
        let mu = surface_area_measure(&cube).unwrap();
        assert_eq!(mu.atoms().len(), 6);
        for i in 0..3 {
            assert!((mu.mass_at(&Vector::basis(3, i)) - 1.0).abs() < 1e-12);
        }
        let a = 0.5;
        let ka = boxed(&[0.0, 0.0, -0.5], &[a, a, 0.5]);
        let mu = surface_area_measure(&ka).unwrap();
        assert!((mu.mass_at(&[1.0, 0.0, 0.0]) - a).abs() < 1e-12);
        assert!((mu.mass_at(&[0.0, -1.0, 0.0]) - a).abs() < 1e-12);
        assert!((mu.mass_at(&[0.0, 0.0, 1.0]) - a * a).abs() < 1e-12);
        let sq = ConvexBody::cube(2, 1.0);
        let mu = surface_area_measure(&sq).unwrap();
        assert!((mu.mass_at(&[-1.0, 0.0]) - 2.0).abs() < 1e-12);
        assert!(mu.closure_defect() < 1e-12);
        let flat = ConvexBody::from_points(&[&[0.0, 0.0, 0.0], &[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]]).unwrap();
        assert!(matches!(surface_area_measure(&flat), Err(Error::Domain(_))));
    }

    #[test]
    fn solver_recovers_cube_and_square() {
        let cube = minkowski_solve(&axis_measure(3, &[1.0, 1.0, 1.0])).unwrap();
        for w in half_widths(&cube) {
            assert!((w - 0.5).abs() < 1e-6);
        }
        let sq = minkowski_solve(&axis_measure(2, &[1.0, 1.0])).unwrap();
        for w in half_widths(&sq) {
            assert!((w - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn solver_recovers_the_blaschke_box() {
        let a: f64 = 0.5;
        let ka = boxed(&[0.0, 0.0, -0.5], &[a, a, 0.5]);
        let la = boxed(&[-0.5, -0.5, 0.0], &[0.5, 0.5, a]);
        let sum = blaschke_sum(&ka, &la).unwrap();
        let w = half_widths(&sum);
        let big = (1.0 + a * a).sqrt() / 2.0;
        let small = a / (1.0 + a * a).sqrt();
        assert!((w[0] - big).abs() < 1e-6 && (w[1] - big).abs() < 1e-6, "{w:?}");
        assert!((w[2] - small).abs() < 1e-6, "{w:?}");
        let cube = boxed(&[0.0; 3], &[1.0; 3]);
        let c2 = blaschke_sum(&cube, &cube).unwrap();
        for w in half_widths(&c2) {
            assert!((w - 2f64.sqrt() / 2.0).abs() < 1e-6);
        }
    }

    #[test]
    fn solver_handles_general_polytopes() {
        let p = ConvexBody::from_points(&[
            &[0.0, 0.0, 0.0],
            &[1.3, 0.1, 0.0],
            &[0.2, 1.1, 0.1],
            &[0.1, 0.3, 0.9],
            &[1.0, 1.0, 0.8],
            &[0.7, -0.2, 0.6],
        ])
        .unwrap();
        let mu = surface_area_measure(&p).unwrap();
        let q = minkowski_solve(&mu).unwrap();
        let back = surface_area_measure(&q).unwrap();
        for (u, f) in mu.atoms() {
            assert!((back.mass_at(u) - f).abs() <= 1e-6 * f, "{u:?}");
        }
        // Uniqueness up to translation.
        let c = p.as_vpolytope().unwrap().hull().unwrap().centroid().unwrap();
        let g = sphere_grid(3, 2000, 0).unwrap();
        assert!(hausdorff_distance(&p.translate(&c.neg()), &q, &g).unwrap() < 1e-6);
    }

    #[test]
    fn planar_blaschke_is_minkowski_up_to_translation() {
        let g = sphere_grid(2, 720, 0).unwrap();
        let p = ConvexBody::from_points(&[&[0.0, 0.0], &[2.0, 0.5], &[0.5, 1.5]]).unwrap();
        let q = ConvexBody::from_points(&[&[1.0, 1.0], &[2.0, 1.0], &[2.0, 3.0], &[0.5, 2.0]]).unwrap();
        let b = blaschke_sum(&p, &q).unwrap();
        let m = minkowski_sum(&p, &q).unwrap();
        let c = m.as_vpolytope().unwrap().hull().unwrap().centroid().unwrap();
        assert!(hausdorff_distance(&b, &m.translate(&c.neg()), &g).unwrap() < 1e-8);
    }

    #[test]
    fn blaschke_measure_audit() {
        let p = boxed(&[0.0; 3], &[1.0, 2.0, 0.5]);
        let rot = LinearMap::rotation(3, 0, 1, 0.4);
        let q = ConvexBody::vpolytope(
            boxed(&[-0.5; 3], &[0.5; 3]).as_vpolytope().unwrap().vertices().iter().map(|x| rot.apply(x)).collect(),
        )
        .unwrap();
        let s = blaschke_sum(&p, &q).unwrap();
        let want = surface_area_measure(&p).unwrap().merge(&surface_area_measure(&q).unwrap()).unwrap();
        let got = surface_area_measure(&s).unwrap();
        assert_eq!(got.atoms().len(), want.atoms().len());
        for (u, f) in want.atoms() {
            assert!((got.mass_at(u) - f).abs() <= 1e-6 * f);
        }
    }

    #[test]
    fn solver_input_errors() {
        let open = SurfaceAreaMeasure::new(2, vec![(v(&[1.0, 0.0]), 1.0), (v(&[-1.0, 0.0]), 2.0)]).unwrap();
        assert!(matches!(minkowski_solve(&open), Err(Error::Argument(_))));
        let flat = SurfaceAreaMeasure::new(3, vec![(v(&[1.0, 0.0, 0.0]), 1.0), (v(&[-1.0, 0.0, 0.0]), 1.0)]).unwrap();
        assert!(matches!(minkowski_solve(&flat), Err(Error::Argument(_))));
        assert!(SurfaceAreaMeasure::new(2, vec![(v(&[1.0, 0.0]), 1.0), (v(&[2.0, 0.0]), 1.0)]).is_err());
        assert!(SurfaceAreaMeasure::new(2, vec![(v(&[1.0, 0.0]), -1.0)]).is_err());
    }

    #[test]
    fn hessian_matches_finite_differences() {
        let p = ConvexBody::from_points(&[
            &[0.0, 0.0, 0.0],
            &[1.3, 0.1, 0.0],
            &[0.2, 1.1, 0.1],
            &[0.1, 0.3, 0.9],
            &[1.0, 1.0, 0.8],
        ])
        .unwrap();
        let facets = p.as_vpolytope().unwrap().hull().unwrap().facets();
        let normals: Vec<Vector> = facets.iter().map(|f| f.normal.clone()).collect();
        let h: Vec<f64> = facets.iter().map(|f| f.offset + 0.3).collect();
        let base = cell(&normals, &h).unwrap();
        let eps = 1e-6;
        for j in 0..h.len() {
            let mut hp = h.clone();
            hp[j] += eps;
            let up = cell(&normals, &hp).unwrap();
            for i in 0..h.len() {
                let fd = (up.areas[i] - base.areas[i]) / eps;
                assert!((fd - base.hess[(i, j)]).abs() < 1e-4, "{i} {j}: {fd} vs {}", base.hess[(i, j)]);
            }
        }
    }
}
