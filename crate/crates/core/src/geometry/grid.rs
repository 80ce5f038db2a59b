use super::{dot, norm, Vector};
use crate::error::{arg, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use std::collections::HashMap;
use std::f64::consts::PI;

/// Surface measure of S^{n-1}: 2π^{n/2} / Γ(n/2).
pub fn sphere_area(n: usize) -> f64 {
    assert!(n >= 1);
    // Γ(n/2) by the half-integer recursion.
    let mut gamma = if n % 2 == 0 { 1.0 } else { PI.sqrt() };
    let mut x = if n % 2 == 0 { 1.0 } else { 0.5 };
    while x + 1e-9 < n as f64 / 2.0 {
        gamma *= x;
        x += 1.0;
    }
    2.0 * PI.powf(n as f64 / 2.0) / gamma
}

/// Unit directions on S^{n-1} with quadrature weights.
///
/// The grid is antipodally symmetric: the second half of `directions` is the
/// coordinatewise negation of the first half, so `−u` is in the grid bit for bit.
#[derive(Clone, Debug)]
pub struct DirectionGrid {
    dim: usize,
    resolution: usize,
    seed: u64,
    directions: Vec<Vector>,
    weights: Vec<f64>,
    index: Lookup,
}

#[derive(Clone, Debug)]
enum Lookup {
    Sign,
    Angle,
    Hash { cell: f64, buckets: HashMap<(i64, i64, i64), Vec<u32>> },
    Scan,
}

impl PartialEq for DirectionGrid {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim
            && self.resolution == other.resolution
            && self.seed == other.seed
            && self.directions == other.directions
    }
}

/// Builds the standard grid for (n, resolution, seed).
///
/// n=1 gives {+1, −1}; n=2 equally spaced angles; n=3 a Fibonacci lattice on the
/// upper hemisphere together with its antipodes, rotated about the axis by a
/// seed-dependent angle (seed 0 is unrotated); n ≥ 4 normalized Gaussian samples
/// with their antipodes. Odd resolutions are rounded up to the next even count.
pub fn sphere_grid(n: usize, resolution: usize, seed: u64) -> Result<DirectionGrid> {
    if n < 1 {
        return arg("sphere_grid: dimension must be at least 1");
    }
    if resolution < 2 {
        return arg("sphere_grid: resolution must be at least 2");
    }
    let count = resolution + resolution % 2;
    let half = count / 2;
    let mut first: Vec<Vec<f64>> = Vec::with_capacity(half);
    match n {
        1 => first.push(vec![1.0]),
        2 => {
            let step = 2.0 * PI / count as f64;
            for k in 0..half {
                let t = step * k as f64;
                first.push(vec![t.cos(), t.sin()]);
            }
        }
        3 => {
            let golden = PI * (3.0 - 5f64.sqrt());
            let offset = if seed == 0 {
                0.0
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                2.0 * PI * rand::Rng::random::<f64>(&mut rng)
            };
            for i in 0..half {
                let z = 1.0 - (i as f64 + 0.5) / half as f64;
                let r = (1.0 - z * z).max(0.0).sqrt();
                let phi = golden * i as f64 + offset;
                first.push(vec![r * phi.cos(), r * phi.sin(), z]);
            }
        }
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            while first.len() < half {
                let v: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
                let r = norm(&v);
                if r > 1e-6 {
                    first.push(v.iter().map(|x| x / r).collect());
                }
            }
        }
    }
    let (dirs, weights) = if n == 1 {
        (vec![vec![1.0], vec![-1.0]], vec![1.0, 1.0])
    } else {
        let mut dirs = first.clone();
        dirs.extend(first.iter().map(|v| v.iter().map(|x| -x).collect::<Vec<f64>>()));
        let w = sphere_area(n) / count as f64;
        (dirs, vec![w; count])
    };
    let directions: Vec<Vector> = dirs.into_iter().map(Vector::raw).collect();
    let index = build_lookup(n, &directions);
    Ok(DirectionGrid { dim: n, resolution: count, seed, directions, weights, index })
}

fn build_lookup(n: usize, directions: &[Vector]) -> Lookup {
    match n {
        1 => Lookup::Sign,
        2 => Lookup::Angle,
        3 => {
            let cell = 2.0 * (4.0 * PI / directions.len() as f64).sqrt();
            let mut buckets: HashMap<(i64, i64, i64), Vec<u32>> = HashMap::new();
            for (i, d) in directions.iter().enumerate() {
                buckets.entry(cell_key(d, cell)).or_default().push(i as u32);
            }
            Lookup::Hash { cell, buckets }
        }
        _ => Lookup::Scan,
    }
}

fn cell_key(x: &[f64], cell: f64) -> (i64, i64, i64) {
    (
        (x[0] / cell).floor() as i64,
        (x[1] / cell).floor() as i64,
        (x[2] / cell).floor() as i64,
    )
}

impl DirectionGrid {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }

    pub fn directions(&self) -> &[Vector] {
        &self.directions
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Index of the antipode of direction `i`.
    pub fn antipode(&self, i: usize) -> usize {
        let half = self.len() / 2;
        if i < half {
            i + half
        } else {
            i - half
        }
    }

    /// Index of the grid direction closest to `x / |x|`. Ties go to the lower index.
    pub fn nearest(&self, x: &[f64]) -> usize {
        match &self.index {
            Lookup::Sign => {
                if x[0] >= 0.0 {
                    0
                } else {
                    1
                }
            }
            Lookup::Angle => {
                let step = 2.0 * PI / self.len() as f64;
                let k = (x[1].atan2(x[0]) / step).round() as i64;
                k.rem_euclid(self.len() as i64) as usize
            }
            Lookup::Hash { cell, buckets } => {
                let r = norm(x);
                let u = [x[0] / r, x[1] / r, x[2] / r];
                let (a, b, c) = cell_key(&u, *cell);
                let mut best: Option<(f64, usize)> = None;
                for da in -1..=1 {
                    for db in -1..=1 {
                        for dc in -1..=1 {
                            if let Some(ids) = buckets.get(&(a + da, b + db, c + dc)) {
                                for &i in ids {
                                    let d = &self.directions[i as usize];
                                    let dist = (d[0] - u[0]).powi(2)
                                        + (d[1] - u[1]).powi(2)
                                        + (d[2] - u[2]).powi(2);
                                    let cand = (dist, i as usize);
                                    if best.is_none_or(|b| cand < b) {
                                        best = Some(cand);
                                    }
                                }
                            }
                        }
                    }
                }
                match best {
                    Some((dist, i)) if dist.sqrt() <= *cell => i,
                    _ => self.scan_nearest(x),
                }
            }
            Lookup::Scan => self.scan_nearest(x),
        }
    }

    /// Indices of the (up to) `k` grid directions closest to `x / |x|`,
    /// nearest first.
    pub fn nearest_k(&self, x: &[f64], k: usize) -> Vec<usize> {
        let k = k.min(self.len());
        let r = norm(x);
        let u: Vec<f64> = x.iter().map(|c| c / r).collect();
        let dist = |i: usize| {
            let d = &self.directions[i];
            d.iter().zip(&u).map(|(a, b)| (a - b) * (a - b)).sum::<f64>()
        };
        let mut cand: Vec<(f64, usize)> = match &self.index {
            Lookup::Angle => {
                let m = self.len() as i64;
                let c = self.nearest(x) as i64;
                let half = k as i64 / 2 + 1;
                (-half..=half).map(|o| (c + o).rem_euclid(m) as usize).map(|i| (dist(i), i)).collect()
            }
            Lookup::Hash { cell, buckets } => {
                let (a, b, c) = cell_key(&u, *cell);
                let mut out = Vec::new();
                for da in -1..=1 {
                    for db in -1..=1 {
                        for dc in -1..=1 {
                            if let Some(ids) = buckets.get(&(a + da, b + db, c + dc)) {
                                out.extend(ids.iter().map(|&i| (dist(i as usize), i as usize)));
                            }
                        }
                    }
                }
                // Only distances up to one cell are guaranteed complete.
                let complete = out.iter().filter(|(d, _)| d.sqrt() <= *cell).count();
                if complete < k {
                    (0..self.len()).map(|i| (dist(i), i)).collect()
                } else {
                    out
                }
            }
            _ => (0..self.len()).map(|i| (dist(i), i)).collect(),
        };
        cand.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        cand.dedup_by_key(|c| c.1);
        cand.truncate(k);
        cand.into_iter().map(|(_, i)| i).collect()
    }

    fn scan_nearest(&self, x: &[f64]) -> usize {
        let mut best = (f64::NEG_INFINITY, 0);
        for (i, d) in self.directions.iter().enumerate() {
            let s = dot(d, x);
            if s > best.0 {
                best = (s, i);
            }
        }
        best.1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn areas() {
        assert_eq!(sphere_area(1), 2.0);
        assert!((sphere_area(2) - 2.0 * PI).abs() < 1e-14);
        assert!((sphere_area(3) - 4.0 * PI).abs() < 1e-14);
        assert!((sphere_area(4) - 2.0 * PI * PI).abs() < 1e-13);
    }

    #[test]
    fn one_dimensional_grid() {
        let g = sphere_grid(1, 10, 0).unwrap();
        assert_eq!(g.len(), 2);
        assert_eq!(g.directions()[0][0], 1.0);
        assert_eq!(g.directions()[1][0], -1.0);
        assert_eq!(g.weights(), &[1.0, 1.0]);
    }

    #[test]
    fn planar_grid_has_resolution_directions() {
        let g = sphere_grid(2, 360, 0).unwrap();
        assert_eq!(g.len(), 360);
        let total: f64 = g.weights().iter().sum();
        assert!((total - 2.0 * PI).abs() < 1e-9);
        // e1 and e2 are present when the resolution is a multiple of 4.
        assert_eq!(g.nearest(&[1.0, 0.0]), 0);
        let e2 = &g.directions()[g.nearest(&[0.0, 1.0])];
        assert!((e2[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn fibonacci_weights_sum_to_sphere_area() {
        let g = sphere_grid(3, 2000, 0).unwrap();
        let total: f64 = super::super::pairwise_sum(g.weights());
        assert!((total - 4.0 * PI).abs() < 1e-6);
    }

    #[test]
    fn nearest_reproduces_grid_directions() {
        for n in 2..=4 {
            let g = sphere_grid(n, 500, 3).unwrap();
            for (i, d) in g.directions().iter().enumerate() {
                assert_eq!(g.nearest(d), i, "n={n} i={i}");
            }
        }
    }

    #[test]
    fn hashed_lookup_agrees_with_scan() {
        let g = sphere_grid(3, 1000, 7).unwrap();
        let probe = sphere_grid(3, 333, 11).unwrap();
        for d in probe.directions() {
            assert_eq!(g.nearest(d), g.scan_nearest(d));
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(sphere_grid(0, 10, 0).is_err());
        assert!(sphere_grid(2, 1, 0).is_err());
    }
}
