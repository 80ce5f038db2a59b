use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use setops::convex::{hausdorff_distance, ConvexBody};
use setops::geometry::sphere_grid;
use setops::harness::{
    cylinder_scenario, fit_polynomial_volume, grid_points, make_op, random_polytope, OpParams, PolytopeKind, SetValue,
};
use setops::operations::{lp_sum, m_combine, LpVariant, MSet};

#[test]
fn minkowski_volume_is_a_homogeneous_polynomial() {
    let op = make_op("minkowski", &OpParams::default()).unwrap();
    let pts = grid_points(4);
    for n in [2, 3] {
        let g = sphere_grid(n, 500, 0).unwrap();
        for seed in 0..5u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let k = SetValue::Convex(random_polytope(n, PolytopeKind::General, &mut rng).unwrap());
            let l = SetValue::Convex(random_polytope(n, PolytopeKind::General, &mut rng).unwrap());
            let fit = fit_polynomial_volume(&op, &k, &l, &pts, &pts, n, &g).unwrap();
            let h = fit.homogeneous.unwrap();
            assert!(h.residual <= 1e-8, "n={n} seed={seed}: {}", h.residual);
            // a₀ = V(K).
            assert!((h.coefficients[0] - fit.volumes[4][0] / 2f64.powi(n as i32)).abs() < 1e-8);
            assert!(fit.residual <= 1e-8);
        }
    }
}

#[test]
fn non_homogeneous_operations_skip_the_homogeneous_fit() {
    let op = make_op("ex2", &OpParams::default()).unwrap();
    let k = SetValue::Convex(ConvexBody::cube(2, 1.0));
    let g = sphere_grid(2, 400, 0).unwrap();
    let fit = fit_polynomial_volume(&op, &k, &k, &grid_points(4), &grid_points(4), 2, &g).unwrap();
    assert!(fit.homogeneous.is_none());
    assert!(fit.residual > 1e-6);
}

#[test]
fn lp_curve_coefficients_give_lp_addition() {
    let g = sphere_grid(3, 2000, 0).unwrap();
    for seed in 0..5u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = random_polytope(3, PolytopeKind::Origin, &mut rng).unwrap();
        let l = random_polytope(3, PolytopeKind::Origin, &mut rng).unwrap();
        for p in [1.5, 3.0] {
            let m = m_combine(&[k.clone(), l.clone()], &MSet::lp_curve(p).unwrap()).unwrap();
            let classic = lp_sum(&k, &l, p, LpVariant::Classic).unwrap();
            assert!(hausdorff_distance(&m.body(), &classic, &g).unwrap() < 1e-10);
        }
    }
}

#[test]
fn polar_sums_of_thin_cylinders_collapse() {
    let out = cylinder_scenario(-1.0, 0.7, &[1, 10, 100], 2000).unwrap();
    assert!(out[0].1 > out[1].1 && out[1].1 > out[2].1, "{out:?}");
    assert!(out[2].1 < 0.05, "{out:?}");
}
