use super::{dot, Vector};
use crate::error::{arg, Result};
use nalgebra::DMatrix;

/// Default determinant threshold below which a map is treated as singular.
pub const DET_TOL: f64 = 1e-10;

/// A linear subspace of R^n of dimension 1 ≤ k ≤ n−1, stored by an orthonormal basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace {
    dim: usize,
    basis: Vec<Vector>,
}

impl Subspace {
    /// Orthonormalizes `spanning` (Gram–Schmidt). The vectors must be independent.
    pub fn new(spanning: &[Vector]) -> Result<Self> {
        let Some(first) = spanning.first() else {
            return arg("subspace needs at least one spanning vector");
        };
        let n = first.dim();
        if spanning.iter().any(|v| v.dim() != n) {
            return arg("subspace spanning vectors have mixed dimensions");
        }
        if spanning.len() >= n {
            return arg(format!("subspace dimension must be between 1 and {}", n - 1));
        }
        let mut basis: Vec<Vector> = Vec::new();
        for v in spanning {
            let mut w = v.clone();
            // Two passes keep the basis orthonormal to machine precision.
            for _ in 0..2 {
                for b in &basis {
                    let c = dot(&w, b);
                    w = w.sub(&b.scale(c));
                }
            }
            let r = w.norm();
            if r <= 1e-12 * v.norm().max(1.0) {
                return arg("subspace spanning vectors are linearly dependent");
            }
            basis.push(w.scale(1.0 / r));
        }
        Ok(Subspace { dim: n, basis })
    }

    /// The line spanned by `u`.
    pub fn line(u: &Vector) -> Result<Self> {
        Subspace::new(std::slice::from_ref(u))
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    /// Orthogonal projection x|S = Σ (x·b_i) b_i.
    pub fn project(&self, x: &[f64]) -> Vector {
        let mut out = vec![0.0; self.dim];
        for b in &self.basis {
            let c = dot(x, b);
            for (o, bi) in out.iter_mut().zip(b.iter()) {
                *o += c * bi;
            }
        }
        Vector::raw(out)
    }
}

/// Orthogonal projection of `x` onto `s`.
pub fn project_vector(x: &Vector, s: &Subspace) -> Result<Vector> {
    if x.dim() != s.ambient_dim() {
        return arg("project_vector: dimension mismatch");
    }
    Ok(s.project(x))
}

/// An n×n real matrix with a cached inverse when |det| exceeds the threshold.
#[derive(Clone, Debug)]
pub struct LinearMap {
    n: usize,
    rows: Vec<f64>,
    det: f64,
    inverse: Option<Vec<f64>>,
}

impl PartialEq for LinearMap {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.rows == other.rows
    }
}

impl LinearMap {
    /// Row-major n×n matrix with the default singularity threshold.
    pub fn new(n: usize, rows: Vec<f64>) -> Result<Self> {
        Self::with_det_tol(n, rows, DET_TOL)
    }

    pub fn with_det_tol(n: usize, rows: Vec<f64>, det_tol: f64) -> Result<Self> {
        if n == 0 || rows.len() != n * n {
            return arg("linear map needs n*n entries");
        }
        if rows.iter().any(|x| !x.is_finite()) {
            return arg("linear map entries must be finite");
        }
        let m = DMatrix::from_row_slice(n, n, &rows);
        let det = m.determinant();
        let inverse = if det.abs() > det_tol {
            m.try_inverse().map(|inv| {
                let mut r = Vec::with_capacity(n * n);
                for i in 0..n {
                    for j in 0..n {
                        r.push(inv[(i, j)]);
                    }
                }
                r
            })
        } else {
            None
        };
        Ok(LinearMap { n, rows, det, inverse })
    }

    pub fn identity(n: usize) -> Self {
        let mut rows = vec![0.0; n * n];
        for i in 0..n {
            rows[i * n + i] = 1.0;
        }
        LinearMap::new(n, rows).expect("identity is valid")
    }

    pub fn diagonal(d: &[f64]) -> Result<Self> {
        let n = d.len();
        let mut rows = vec![0.0; n * n];
        for i in 0..n {
            rows[i * n + i] = d[i];
        }
        LinearMap::new(n, rows)
    }

    /// Rotation by `angle` in the (i, j) coordinate plane.
    pub fn rotation(n: usize, i: usize, j: usize, angle: f64) -> Self {
        let mut rows = vec![0.0; n * n];
        for k in 0..n {
            rows[k * n + k] = 1.0;
        }
        let (s, c) = angle.sin_cos();
        rows[i * n + i] = c;
        rows[i * n + j] = -s;
        rows[j * n + i] = s;
        rows[j * n + j] = c;
        LinearMap::new(n, rows).expect("rotation is valid")
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[f64] {
        &self.rows
    }

    pub fn det(&self) -> f64 {
        self.det
    }

    pub fn is_invertible(&self) -> bool {
        self.inverse.is_some()
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.rows[i * self.n + j]
    }

    pub fn apply(&self, x: &[f64]) -> Vector {
        Vector::raw(mat_vec(&self.rows, self.n, x, false))
    }

    /// φᵗx.
    pub fn apply_transpose(&self, x: &[f64]) -> Vector {
        Vector::raw(mat_vec(&self.rows, self.n, x, true))
    }

    /// φ⁻¹x, if φ is invertible.
    pub fn apply_inverse(&self, x: &[f64]) -> Option<Vector> {
        self.inverse.as_ref().map(|inv| Vector::raw(mat_vec(inv, self.n, x, false)))
    }

    /// The inverse map, if it exists.
    pub fn inverse(&self) -> Option<LinearMap> {
        self.inverse.as_ref().map(|inv| LinearMap::new(self.n, inv.clone()).expect("finite inverse"))
    }

    /// self ∘ other.
    pub fn compose(&self, other: &LinearMap) -> LinearMap {
        let n = self.n;
        let mut rows = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                rows[i * n + j] = (0..n).map(|k| self.entry(i, k) * other.entry(k, j)).sum();
            }
        }
        LinearMap::new(n, rows).expect("product of finite maps is finite")
    }

    /// Ratio of the largest to the smallest singular value.
    pub fn condition(&self) -> f64 {
        let m = DMatrix::from_row_slice(self.n, self.n, &self.rows);
        let sv = m.singular_values();
        let max = sv.max();
        let min = sv.min();
        if min == 0.0 {
            f64::INFINITY
        } else {
            max / min
        }
    }
}

fn mat_vec(rows: &[f64], n: usize, x: &[f64], transpose: bool) -> Vec<f64> {
    let mut out = vec![0.0; n];
    for i in 0..n {
        let mut s = 0.0;
        for j in 0..n {
            let a = if transpose { rows[j * n + i] } else { rows[i * n + j] };
            s += a * x[j];
        }
        out[i] = s;
    }
    out
}

/// φx.
pub fn apply_linear(phi: &LinearMap, x: &Vector) -> Result<Vector> {
    if x.dim() != phi.dim() {
        return arg("apply_linear: dimension mismatch");
    }
    Ok(phi.apply(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[f64]) -> Vector {
        Vector::new(c.to_vec()).unwrap()
    }

    #[test]
    fn projection_examples() {
        let e1 = Subspace::line(&v(&[1.0, 0.0])).unwrap();
        assert_eq!(project_vector(&v(&[3.0, 4.0]), &e1).unwrap().as_slice(), &[3.0, 0.0]);
        let s = Subspace::line(&v(&[1.0, 1.0, 0.0])).unwrap();
        let p = project_vector(&v(&[1.0, 1.0, 1.0]), &s).unwrap();
        for (a, b) in p.iter().zip([1.0, 1.0, 0.0]) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn subspace_dimension_bounds() {
        assert!(Subspace::new(&[v(&[1.0, 0.0]), v(&[0.0, 1.0])]).is_err());
        assert!(Subspace::new(&[v(&[1.0, 0.0, 0.0]), v(&[2.0, 0.0, 0.0])]).is_err());
    }

    #[test]
    fn linear_examples() {
        let x = v(&[1.0, 1.0]);
        assert_eq!(apply_linear(&LinearMap::identity(2), &x).unwrap(), x);
        let d = LinearMap::diagonal(&[2.0, 1.0]).unwrap();
        assert_eq!(apply_linear(&d, &x).unwrap().as_slice(), &[2.0, 1.0]);
        let r = LinearMap::rotation(2, 0, 1, std::f64::consts::FRAC_PI_2);
        let y = apply_linear(&r, &v(&[1.0, 0.0])).unwrap();
        assert!(y[0].abs() < 1e-15 && (y[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn singular_maps_have_no_inverse() {
        let m = LinearMap::new(2, vec![1.0, 2.0, 2.0, 4.0]).unwrap();
        assert!(!m.is_invertible());
        assert!(m.apply_inverse(&[1.0, 0.0]).is_none());
        let m = LinearMap::new(2, vec![2.0, 1.0, 0.0, 3.0]).unwrap();
        let y = m.apply_inverse(&m.apply(&[0.3, -0.7])).unwrap();
        assert!((y[0] - 0.3).abs() < 1e-14 && (y[1] + 0.7).abs() < 1e-14);
        assert!((m.det() - 6.0).abs() < 1e-12);
    }
}
