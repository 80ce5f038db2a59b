//! Vectors, direction grids on the sphere, subspaces and linear maps.

mod grid;
mod linear;

pub use grid::{sphere_area, sphere_grid, DirectionGrid};
pub use linear::{apply_linear, project_vector, LinearMap, Subspace};

use crate::error::{arg, Result};
use std::ops::{Deref, Index};

/// A point or direction in R^n, n ≥ 1, with finite coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct Vector(Vec<f64>);

impl Vector {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return arg("vector must have at least one coordinate");
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return arg("vector coordinates must be finite");
        }
        Ok(Vector(coords))
    }

    /// Builds a vector without validation. Callers guarantee finiteness.
    pub(crate) fn raw(coords: Vec<f64>) -> Self {
        Vector(coords)
    }

    pub fn zeros(n: usize) -> Self {
        Vector(vec![0.0; n])
    }

    pub fn basis(n: usize, i: usize) -> Self {
        let mut v = vec![0.0; n];
        v[i] = 1.0;
        Vector(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn dot(&self, other: &[f64]) -> f64 {
        dot(&self.0, other)
    }

    pub fn norm(&self) -> f64 {
        norm(&self.0)
    }

    pub fn scale(&self, s: f64) -> Vector {
        Vector(self.0.iter().map(|x| x * s).collect())
    }

    pub fn add(&self, other: &[f64]) -> Vector {
        Vector(self.0.iter().zip(other).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &[f64]) -> Vector {
        Vector(self.0.iter().zip(other).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Vector {
        Vector(self.0.iter().map(|x| -x).collect())
    }

    /// Unit vector in the same direction; `None` for the zero vector.
    pub fn normalized(&self) -> Option<Vector> {
        let r = self.norm();
        if r == 0.0 {
            None
        } else {
            Some(self.scale(1.0 / r))
        }
    }
}

impl Deref for Vector {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl Index<usize> for Vector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl From<Vector> for Vec<f64> {
    fn from(v: Vector) -> Vec<f64> {
        v.0
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Pairwise summation; the result depends only on the order of `xs`.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 16 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Quadrature of `f` over the grid: Σ w_i f(u_i), summed pairwise.
pub fn integrate(grid: &DirectionGrid, f: impl Fn(&Vector) -> f64) -> f64 {
    let terms: Vec<f64> = grid
        .directions()
        .iter()
        .zip(grid.weights())
        .map(|(u, w)| w * f(u))
        .collect();
    pairwise_sum(&terms)
}

/// Volume of the Euclidean unit ball in R^n.
pub fn unit_ball_volume(n: usize) -> f64 {
    sphere_area(n) / n as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vector_rejects_empty_and_nan() {
        assert!(Vector::new(vec![]).is_err());
        assert!(Vector::new(vec![1.0, f64::NAN]).is_err());
        assert!(Vector::new(vec![1.0, f64::INFINITY]).is_err());
    }

    #[test]
    fn ball_volumes() {
        assert!((unit_ball_volume(1) - 2.0).abs() < 1e-15);
        assert!((unit_ball_volume(2) - std::f64::consts::PI).abs() < 1e-14);
        assert!((unit_ball_volume(3) - 4.0 * std::f64::consts::PI / 3.0).abs() < 1e-14);
        let pi2 = std::f64::consts::PI.powi(2);
        assert!((unit_ball_volume(4) - pi2 / 2.0).abs() < 1e-13);
    }

    #[test]
    fn pairwise_sum_matches_naive_on_small_input() {
        let xs: Vec<f64> = (0..100).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&xs), 4950.0);
    }
}
