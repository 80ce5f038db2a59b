//! Least-squares polynomial fits of V(rK * sL).

use super::{number, BinaryOp, SetValue};
use crate::convex::volume_convex;
use crate::error::{arg, Result};
use crate::geometry::DirectionGrid;
use crate::star::volume_star;
use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

/// Homogeneous form Σᵢ aᵢ r^{n−i} sⁱ.
#[derive(Clone, Debug)]
pub struct HomogeneousFit {
    pub coefficients: Vec<f64>,
    pub residual: f64,
}

#[derive(Clone, Debug)]
pub struct PolynomialFit {
    pub op: String,
    pub dim: usize,
    pub r_grid: Vec<f64>,
    pub s_grid: Vec<f64>,
    pub degree: usize,
    /// a_ij, the coefficient of rⁱsʲ, stored as rows i = 0..=degree.
    pub coefficients: Vec<Vec<f64>>,
    /// ‖fit − data‖∞ / max|data| for the full fit.
    pub residual: f64,
    /// Present when the operation is tagged homogeneous of degree 1.
    pub homogeneous: Option<HomogeneousFit>,
    /// V(rK * sL), indexed [r][s].
    pub volumes: Vec<Vec<f64>>,
}

impl PolynomialFit {
    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("op".into(), json!(self.op));
        m.insert("dim".into(), json!(self.dim));
        m.insert("degree".into(), json!(self.degree));
        m.insert("r_grid".into(), json!(self.r_grid));
        m.insert("s_grid".into(), json!(self.s_grid));
        m.insert("coefficients".into(), json!(self.coefficients));
        m.insert("residual".into(), number(self.residual));
        m.insert("homogeneous_flag".into(), json!(self.homogeneous.is_some()));
        if let Some(h) = &self.homogeneous {
            m.insert("homogeneous_coefficients".into(), json!(h.coefficients));
            m.insert("homogeneous_residual".into(), number(h.residual));
        }
        m.insert("volumes".into(), json!(self.volumes));
        Value::Object(m)
    }
}

/// g + 1 equally spaced points of [0, 2].
pub fn grid_points(g: usize) -> Vec<f64> {
    (0..=g).map(|k| 2.0 * k as f64 / g.max(1) as f64).collect()
}

/// Operations whose catalog entry is homogeneous of degree 1.
fn degree_one(op: &BinaryOp) -> bool {
    !matches!(op.name(), "ex2" | "ex5555" | "ex555")
}

fn volume(x: &SetValue, grid: &DirectionGrid) -> Result<f64> {
    match x {
        SetValue::Convex(k) => volume_convex(k, grid),
        SetValue::Star(s) => match s.as_convex() {
            Some(k) => volume_convex(k, grid),
            None => volume_star(s, grid),
        },
    }
}

/// Least squares with a rank check; errors when the design is singular.
fn solve(a: &DMatrix<f64>, b: &DVector<f64>) -> Result<DVector<f64>> {
    let svd = a.clone().svd(true, true);
    let sv = &svd.singular_values;
    let top = sv.iter().copied().fold(0.0, f64::max);
    let low = sv.iter().copied().fold(f64::INFINITY, f64::min);
    if a.nrows() < a.ncols() || !(top > 0.0) || low <= 1e-12 * top {
        return arg("fit_polynomial_volume: design matrix is singular (grid too small)");
    }
    svd.solve(b, 0.0).map_err(|e| crate::Error::Argument(format!("fit_polynomial_volume: {e}")))
}

fn relative_residual(a: &DMatrix<f64>, c: &DVector<f64>, b: &DVector<f64>) -> f64 {
    let top = b.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let err = (a * c - b).iter().map(|x| x.abs()).fold(0.0, f64::max);
    if top == 0.0 {
        err
    } else {
        err / top
    }
}

/// Fits V(rK * sL) over the product grid by Σ_{i,j ≤ degree} a_ij rⁱsʲ, and
/// for degree-1 homogeneous operations also by Σᵢ aᵢ r^{n−i} sⁱ.
pub fn fit_polynomial_volume(
    op: &BinaryOp,
    k: &SetValue,
    l: &SetValue,
    r_grid: &[f64],
    s_grid: &[f64],
    degree: usize,
    grid: &DirectionGrid,
) -> Result<PolynomialFit> {
    let n = k.dim();
    if l.dim() != n || grid.dim() != n {
        return arg("fit_polynomial_volume: dimension mismatch");
    }
    if r_grid.iter().chain(s_grid).any(|x| !(*x >= 0.0 && x.is_finite())) {
        return arg("fit_polynomial_volume: r and s must be finite and nonnegative");
    }
    let cols = (degree + 1) * (degree + 1);
    if r_grid.len() * s_grid.len() < cols {
        return arg("fit_polynomial_volume: grid needs at least (degree+1)^2 points");
    }
    let pairs: Vec<(f64, f64)> = r_grid.iter().flat_map(|&r| s_grid.iter().map(move |&s| (r, s))).collect();
    let vols: Vec<f64> = pairs
        .par_iter()
        .map(|&(r, s)| volume(&op.apply(&k.scale(r), &l.scale(s))?, grid))
        .collect::<Result<_>>()?;
    let b = DVector::from_vec(vols.clone());

    let full = DMatrix::from_fn(pairs.len(), cols, |row, col| {
        let (r, s) = pairs[row];
        r.powi((col / (degree + 1)) as i32) * s.powi((col % (degree + 1)) as i32)
    });
    let c = solve(&full, &b)?;
    let residual = relative_residual(&full, &c, &b);
    let coefficients = (0..=degree).map(|i| (0..=degree).map(|j| c[i * (degree + 1) + j]).collect()).collect();

    let homogeneous = if degree_one(op) {
        let hom = DMatrix::from_fn(pairs.len(), n + 1, |row, i| {
            let (r, s) = pairs[row];
            r.powi((n - i) as i32) * s.powi(i as i32)
        });
        let h = solve(&hom, &b)?;
        Some(HomogeneousFit { residual: relative_residual(&hom, &h, &b), coefficients: h.iter().copied().collect() })
    } else {
        None
    };
    let volumes = vols.chunks(s_grid.len()).map(|c| c.to_vec()).collect();
    Ok(PolynomialFit {
        op: op.name().to_string(),
        dim: n,
        r_grid: r_grid.to_vec(),
        s_grid: s_grid.to_vec(),
        degree,
        coefficients,
        residual,
        homogeneous,
        volumes,
    })
}

#[cfg(test)]
mod tests {
    use super::super::{make_op, OpParams};
    use super::*;
    use crate::convex::ConvexBody;
    use crate::geometry::sphere_grid;
    use crate::star::StarSet;
    use std::f64::consts::PI;
    use std::sync::Arc;

    #[test]
    fn minkowski_square_gives_the_binomial() {
        let op = make_op("minkowski", &OpParams::default()).unwrap();
        let sq = SetValue::Convex(ConvexBody::from_points(&[&[0.0, 0.0], &[1.0, 0.0], &[1.0, 1.0], &[0.0, 1.0]]).unwrap());
        let g = sphere_grid(2, 64, 0).unwrap();
        let pts = grid_points(4);
        let fit = fit_polynomial_volume(&op, &sq, &sq, &pts, &pts, 2, &g).unwrap();
        assert!(fit.residual <= 1e-9);
        let h = fit.homogeneous.unwrap();
        for (c, want) in h.coefficients.iter().zip([1.0, 2.0, 1.0]) {
            assert!((c - want).abs() < 1e-9);
        }
        assert!(h.residual <= 1e-9);
        assert!((fit.coefficients[1][1] - 2.0).abs() < 1e-9);
    }

    #[test]
    fn radial_two_sum_of_discs() {
        let op = make_op("radial", &OpParams::with_p(2.0)).unwrap();
        let g = Arc::new(sphere_grid(2, 10_000, 0).unwrap());
        let b = SetValue::Star(StarSet::from_convex(ConvexBody::unit_ball(2), g.clone()).unwrap());
        let pts = grid_points(4);
        let fit = fit_polynomial_volume(&op, &b, &b, &pts, &pts, 2, &g).unwrap();
        let h = fit.homogeneous.unwrap();
        assert!(h.residual <= 1e-4);
        assert!((h.coefficients[0] - PI).abs() < 1e-4);
        assert!(h.coefficients[1].abs() < 1e-4);
        assert!((h.coefficients[2] - PI).abs() < 1e-4);
    }

    #[test]
    fn small_grids_are_rejected() {
        let op = make_op("minkowski", &OpParams::default()).unwrap();
        let sq = SetValue::Convex(ConvexBody::cube(2, 1.0));
        let g = sphere_grid(2, 64, 0).unwrap();
        assert!(fit_polynomial_volume(&op, &sq, &sq, &[1.0, 2.0], &[1.0, 2.0], 2, &g).is_err());
        // Enough points, but all on one ray: rank deficient.
        assert!(fit_polynomial_volume(&op, &sq, &sq, &[1.0; 9], &[1.0], 2, &g).is_err());
    }
}
