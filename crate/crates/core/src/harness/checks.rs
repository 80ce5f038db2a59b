//! Randomized checkers for the properties of binary operations.

use super::catalog::cut;
use super::sampling::{random_linear_map, random_pair, random_polytope, random_set, PolytopeKind};
use super::{number, set_distance, BinaryOp, CheckConfig, Domain, GridCache, Property, PropertyReport, SetValue};
use crate::convex::{hausdorff_distance, project_body, ConvexBody};
use crate::error::{arg, Result};
use crate::geometry::{DirectionGrid, LinearMap, Subspace, Vector};
use crate::operations::{symmetrize_convex, Symmetral};
use crate::star::{intersection, section_line, section_set, union, StarSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde_json::{json, Map, Value};
use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Grid caches shared by all checks at a given resolution.
fn shared_grids(resolution: usize) -> Arc<GridCache> {
    static CACHES: OnceLock<Mutex<BTreeMap<usize, Arc<GridCache>>>> = OnceLock::new();
    let mut map = CACHES.get_or_init(Default::default).lock().expect("grid caches poisoned");
    map.entry(resolution).or_insert_with(|| Arc::new(GridCache::new(resolution))).clone()
}

/// FNV-1a, used to give every (op, property) pair its own stream.
fn fnv(s: &str) -> u64 {
    s.bytes().fold(0xcbf29ce484222325, |h, b| (h ^ b as u64).wrapping_mul(0x100000001b3))
}

fn sample_rng(seed: u64, label: &str, i: usize) -> ChaCha8Rng {
    let mut z = seed ^ fnv(label) ^ (i as u64).wrapping_mul(0x9e3779b97f4a7c15);
    // splitmix64 finalizer
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    ChaCha8Rng::seed_from_u64(z ^ (z >> 31))
}

/// Alternates n = 2 and n = 3.
fn sample_dim(i: usize) -> usize {
    2 + i % 2
}

type SampleResult = Result<(f64, Map<String, Value>)>;

/// Runs `f` on every sample in parallel and keeps the worst one (lowest
/// index on ties, so the witness does not depend on scheduling).
fn run<F>(op_label: &str, prop: &str, cfg: &CheckConfig, f: F) -> PropertyReport
where
    F: Fn(&mut ChaCha8Rng, usize, &DirectionGrid, &GridCache) -> SampleResult + Sync,
{
    let grids = shared_grids(cfg.resolution);
    let label = format!("{op_label}/{prop}");
    let results: Vec<(f64, Map<String, Value>)> = (0..cfg.samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(cfg.seed, &label, i);
            let n = sample_dim(i);
            let grid = grids.get(n);
            let (v, mut w) = match f(&mut rng, n, &grid, &grids) {
                Ok((v, w)) => (if v.is_nan() { f64::INFINITY } else { v }, w),
                Err(e) => {
                    let mut w = Map::new();
                    w.insert("error".into(), json!(e.to_string()));
                    (f64::INFINITY, w)
                }
            };
            w.insert("sample".into(), json!(i));
            w.insert("dim".into(), json!(n));
            (v, w)
        })
        .collect();
    let mut best: Option<(f64, Map<String, Value>)> = None;
    for (v, w) in results {
        if best.as_ref().is_none_or(|(b, _)| v > *b) {
            best = Some((v, w));
        }
    }
    let (max_violation, witness) = best.map_or((0.0, Value::Null), |(v, mut w)| {
        w.insert("violation".into(), number(v));
        (v, Value::Object(w))
    });
    PropertyReport::new(op_label, prop, cfg.samples, max_violation, cfg.tol, witness)
}

/// JSON description of a generated input.
fn describe(x: &SetValue) -> Value {
    let (kind, body) = match x {
        SetValue::Convex(k) => ("convex", Some(k)),
        SetValue::Star(s) => ("star", s.as_convex()),
    };
    match body.and_then(|k| k.as_vpolytope()) {
        Some(p) => json!({
            "kind": kind,
            "vertices": p.vertices().iter().map(|v| v.as_slice().to_vec()).collect::<Vec<_>>(),
        }),
        None => json!({ "kind": kind, "repr": format!("{:?}", body) }),
    }
}

fn witness(inputs: &[&SetValue]) -> Map<String, Value> {
    let mut w = Map::new();
    w.insert("inputs".into(), Value::Array(inputs.iter().map(|x| describe(x)).collect()));
    w
}

fn gaussian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vector {
    loop {
        let g: Vec<f64> = (0..n).map(|_| StandardNormal.sample(rng)).collect();
        if let Some(u) = Vector::raw(g).normalized() {
            return u;
        }
    }
}

/// (K*L)|S against (K|S)*(L|S), as a Hausdorff distance on `grid`.
pub fn projection_violation(op: &BinaryOp, a: &SetValue, b: &SetValue, s: &Subspace, grid: &DirectionGrid) -> Result<f64> {
    let proj = |x: &SetValue| -> Result<SetValue> {
        match x {
            SetValue::Convex(k) => Ok(SetValue::Convex(project_body(k, s)?)),
            SetValue::Star(_) => arg("projection covariance applies to convex bodies"),
        }
    };
    let lhs = proj(&op.apply(a, b)?)?;
    let rhs = op.apply(&proj(a)?, &proj(b)?)?;
    set_distance(&lhs, &rhs, grid)
}

/// Compares (K*L) ∩ l_u with (K ∩ l_u)*(L ∩ l_u) at both ends of the line.
pub fn section_violation(op: &BinaryOp, a: &SetValue, b: &SetValue, u: &Vector) -> Result<f64> {
    let (SetValue::Star(k), SetValue::Star(l)) = (a, b) else {
        return arg("section covariance applies to star sets");
    };
    let grid = op.grids().get(k.dim());
    let lhs = match op.apply(a, b)? {
        SetValue::Star(s) => section_line(&s, u)?,
        SetValue::Convex(_) => return arg("star operation returned a convex body"),
    };
    let ks = SetValue::Star(section_set(k, u, grid.clone())?);
    let ls = SetValue::Star(section_set(l, u, grid)?);
    let rhs = match op.apply(&ks, &ls)? {
        SetValue::Star(s) => section_line(&s, u)?,
        SetValue::Convex(_) => return arg("star operation returned a convex body"),
    };
    Ok((lhs.0 - rhs.0).abs().max((lhs.1 - rhs.1).abs()))
}

/// φ(K*L) against φK*φL.
pub fn gl_violation(op: &BinaryOp, a: &SetValue, b: &SetValue, phi: &LinearMap, grid: &DirectionGrid) -> Result<f64> {
    let lhs = op.apply(a, b)?.transform(phi)?;
    let rhs = op.apply(&a.transform(phi)?, &b.transform(phi)?)?;
    set_distance(&lhs, &rhs, grid)
}

pub fn check_projection_covariance(op: &BinaryOp, cfg: &CheckConfig) -> Result<PropertyReport> {
    check_property(op, Property::ProjectionCovariance, cfg)
}

pub fn check_section_covariance(op: &BinaryOp, cfg: &CheckConfig) -> Result<PropertyReport> {
    check_property(op, Property::SectionCovariance, cfg)
}

pub fn check_gl_covariance(op: &BinaryOp, cfg: &CheckConfig) -> Result<PropertyReport> {
    check_property(op, Property::GlCovariance, cfg)
}

/// The algebraic properties; covariance properties have their own entry points.
pub fn check_algebraic(op: &BinaryOp, prop: Property, cfg: &CheckConfig) -> Result<PropertyReport> {
    if matches!(prop, Property::ProjectionCovariance | Property::SectionCovariance | Property::GlCovariance) {
        return arg(format!("{} is not an algebraic property", prop.name()));
    }
    check_property(op, prop, cfg)
}

/// Runs a randomized check of `prop` on `op`. Inputs are drawn from the
/// operation's domain in dimensions 2 and 3 alternately.
pub fn check_property(op: &BinaryOp, prop: Property, cfg: &CheckConfig) -> Result<PropertyReport> {
    let domain = op.domain();
    if domain == Domain::Interval1d {
        return arg("checks run on planar and spatial domains");
    }
    match prop {
        Property::ProjectionCovariance if domain.is_star() => {
            return arg("projection covariance applies to convex domains")
        }
        Property::SectionCovariance if !domain.is_star() => return arg("section covariance applies to star domains"),
        Property::Valuation if domain.is_symmetric() => {
            return arg("valuation needs a domain closed under the cuts used to build K ∪ L")
        }
        _ => {}
    }
    let label = op.name().to_string();
    let pair = |rng: &mut ChaCha8Rng, n: usize, g: &GridCache| random_pair(domain, n, rng, g);
    let report = match prop {
        Property::ProjectionCovariance => run(&label, prop.name(), cfg, |rng, n, grid, g| {
            let (a, b) = pair(rng, n, g)?;
            let k = if n == 3 { rng.random_range(1..=2) } else { 1 };
            let basis: Vec<Vector> = (0..k).map(|_| gaussian(n, rng)).collect();
            let s = Subspace::new(&basis)?;
            let v = projection_violation(op, &a, &b, &s, grid)?;
            let mut w = witness(&[&a, &b]);
            w.insert("subspace".into(), json!(s.basis().iter().map(|v| v.as_slice().to_vec()).collect::<Vec<_>>()));
            Ok((v, w))
        }),
        Property::SectionCovariance => run(&label, prop.name(), cfg, |rng, n, _, g| {
            let (a, b) = pair(rng, n, g)?;
            let u = gaussian(n, rng);
            let v = section_violation(op, &a, &b, &u)?;
            let mut w = witness(&[&a, &b]);
            w.insert("direction".into(), json!(u.as_slice()));
            Ok((v, w))
        }),
        Property::GlCovariance => run(&label, prop.name(), cfg, |rng, n, grid, g| {
            let (a, b) = pair(rng, n, g)?;
            let phi = random_linear_map(n, rng);
            let v = gl_violation(op, &a, &b, &phi, grid)?;
            let mut w = witness(&[&a, &b]);
            w.insert("map".into(), json!(phi.rows()));
            Ok((v, w))
        }),
        Property::Commutativity => run(&label, prop.name(), cfg, |rng, n, grid, g| {
            let (a, b) = pair(rng, n, g)?;
            let v = set_distance(&op.apply(&a, &b)?, &op.apply(&b, &a)?, grid)?;
            Ok((v, witness(&[&a, &b])))
        }),
        Property::Associativity => run(&label, prop.name(), cfg, |rng, n, grid, g| {
            let (a, b) = pair(rng, n, g)?;
            let c = random_set(domain, n, rng, g)?;
            let lhs = op.apply(&a, &op.apply(&b, &c)?)?;
            let rhs = op.apply(&op.apply(&a, &b)?, &c)?;
            Ok((set_distance(&lhs, &rhs, grid)?, witness(&[&a, &b, &c])))
        }),
        Property::Homogeneity => run(&label, prop.name(), cfg, |rng, n, grid, g| {
            let (a, b) = pair(rng, n, g)?;
            let r = rng.random_range(0.25..2.0);
            let lhs = op.apply(&a.scale(r), &b.scale(r))?;
            let rhs = op.apply(&a, &b)?.scale(r);
            let mut w = witness(&[&a, &b]);
            w.insert("r".into(), json!(r));
            Ok((set_distance(&lhs, &rhs, grid)?, w))
        }),
        Property::QuasiHomogeneity => run(&label, prop.name(), cfg, |rng, n, grid, g| {
            let (a, b) = pair(rng, n, g)?;
            let r = rng.random_range(0.25..2.0);
            let base = op.apply(&a, &b)?;
            let scaled = op.apply(&a.scale(r), &b.scale(r))?;
            let dirs = grid.directions();
            let x: Vec<f64> = dirs.par_iter().map(|u| base.value_at(u)).collect();
            let y: Vec<f64> = dirs.par_iter().map(|u| scaled.value_at(u)).collect();
            let top = x.iter().copied().fold(0.0, f64::max);
            let mut ratios: Vec<f64> =
                x.iter().zip(&y).filter(|(a, _)| **a > 1e-6 * top.max(1e-300)).map(|(a, b)| b / a).collect();
            if ratios.is_empty() {
                return arg("quasi-homogeneity: base result is {o}");
            }
            ratios.sort_by(|p, q| p.total_cmp(q));
            let g_r = ratios[ratios.len() / 2];
            let v = x.iter().zip(&y).map(|(a, b)| (b - g_r * a).abs()).fold(0.0, f64::max);
            let mut w = witness(&[&a, &b]);
            w.insert("r".into(), json!(r));
            w.insert("g_r".into(), json!(g_r));
            Ok((v, w))
        }),
        Property::Distributivity => run(&label, prop.name(), cfg, |rng, n, grid, g| {
            let a = random_set(domain, n, rng, g)?;
            let r = rng.random_range(0.25..2.0);
            let s = rng.random_range(0.25..2.0);
            let lhs = op.apply(&a.scale(r), &a.scale(s))?;
            let mut w = witness(&[&a]);
            w.insert("r".into(), json!(r));
            w.insert("s".into(), json!(s));
            Ok((set_distance(&lhs, &a.scale(r + s), grid)?, w))
        }),
        Property::Identity => run(&label, prop.name(), cfg, |rng, n, grid, g| {
            let a = random_set(domain, n, rng, g)?;
            let o = a.origin_like(g);
            let v = set_distance(&op.apply(&a, &o)?, &a, grid)?.max(set_distance(&op.apply(&o, &a)?, &a, grid)?);
            Ok((v, witness(&[&a])))
        }),
        Property::Monotonicity => run(&label, prop.name(), cfg, |rng, n, grid, g| {
            let (a, b) = pair(rng, n, g)?;
            let (a2, b2) = (enlarge(&a, domain, rng, g)?, enlarge(&b, domain, rng, g)?);
            let small = op.apply(&a, &b)?;
            let big = op.apply(&a2, &b2)?;
            let v = grid
                .directions()
                .par_iter()
                .map(|u| (small.value_at(u) - big.value_at(u)).max(0.0))
                .reduce(|| 0.0, f64::max);
            Ok((v, witness(&[&a, &b, &a2, &b2])))
        }),
        Property::Valuation => run(&label, prop.name(), cfg, |rng, n, grid, g| {
            let (k, l, cup, cap) = valuation_inputs(domain, n, rng, g)?;
            let lhs = op.apply(&cup, &cap)?;
            let rhs = op.apply(&k, &l)?;
            Ok((set_distance(&lhs, &rhs, grid)?, witness(&[&k, &l])))
        }),
        Property::SymmetricOutput => run(&label, prop.name(), cfg, |rng, n, grid, g| {
            let sym = if domain.is_star() { Domain::StarSymmetric } else { Domain::ConvexSymmetric };
            let (a, b) = random_pair(sym, n, rng, g)?;
            let out = op.apply(&a, &b)?;
            let v = grid
                .directions()
                .par_iter()
                .map(|u| (out.value_at(u) - out.value_at(&u.neg())).abs())
                .reduce(|| 0.0, f64::max);
            Ok((v, witness(&[&a, &b])))
        }),
    };
    Ok(report)
}

fn polytope_of(x: &SetValue) -> Result<&ConvexBody> {
    let body = match x {
        SetValue::Convex(k) => Some(k),
        SetValue::Star(s) => s.as_convex(),
    };
    body.filter(|k| k.is_vpolytope()).map_or_else(|| arg("generated inputs are polytopes"), Ok)
}

fn rewrap(x: &SetValue, body: ConvexBody, grids: &GridCache) -> Result<SetValue> {
    Ok(match x {
        SetValue::Convex(_) => SetValue::Convex(body),
        SetValue::Star(_) => SetValue::Star(StarSet::from_convex(body.clone(), grids.get(body.dim()))?),
    })
}

/// A polytope containing x: the hull of x and three more points (with their
/// reflections on symmetric domains).
fn enlarge(x: &SetValue, domain: Domain, rng: &mut ChaCha8Rng, grids: &GridCache) -> Result<SetValue> {
    let p = polytope_of(x)?.as_vpolytope().expect("polytope");
    let n = p.dim();
    let mut pts: Vec<Vector> = p.vertices().to_vec();
    for _ in 0..3 {
        let v = gaussian(n, rng).scale(rng.random_range(0.5..1.5));
        if domain.is_symmetric() {
            pts.push(v.neg());
        }
        pts.push(v);
    }
    rewrap(x, ConvexBody::vpolytope(pts)?, grids)
}

/// (K, L, K ∪ L, K ∩ L) with K ∪ L in the domain. Convex domains cut one
/// polytope P by two overlapping half-spaces through o's side, so K ∪ L = P.
fn valuation_inputs(
    domain: Domain,
    n: usize,
    rng: &mut ChaCha8Rng,
    grids: &GridCache,
) -> Result<(SetValue, SetValue, SetValue, SetValue)> {
    if domain.is_star() {
        let (a, b) = random_pair(domain, n, rng, grids)?;
        let (k, l) = (a.as_star().expect("star").clone(), b.as_star().expect("star").clone());
        let cup = SetValue::Star(union(&[k.clone(), l.clone()])?);
        let cap = SetValue::Star(intersection(&[k, l])?);
        return Ok((a, b, cup, cap));
    }
    let kind = if domain == Domain::ConvexAll { PolytopeKind::General } else { PolytopeKind::Origin };
    let p = random_polytope(n, kind, rng)?;
    let hull = p.as_vpolytope().and_then(|v| v.hull()).expect("full-dimensional polytope");
    let e = gaussian(n, rng);
    let (lo, hi) = (-p.support(&e.neg()), p.support(&e));
    // K = P ∩ {x·e ≤ a}, L = P ∩ {x·e ≥ b}, b < a, both containing o when P does.
    let a = if kind == PolytopeKind::Origin { 0.3 * hi } else { lo + 0.6 * (hi - lo) };
    let b = if kind == PolytopeKind::Origin { 0.3 * lo } else { lo + 0.4 * (hi - lo) };
    let hs = hull.halfspaces();
    let scale = hull.scale();
    let with = |extra: &[(Vec<f64>, f64)]| -> Result<ConvexBody> {
        let mut all = hs.clone();
        all.extend_from_slice(extra);
        cut(n, &all, scale)
    };
    let upper = (e.as_slice().to_vec(), a);
    let lower = (e.neg().as_slice().to_vec(), -b);
    let k = with(std::slice::from_ref(&upper))?;
    let l = with(std::slice::from_ref(&lower))?;
    let cap = with(&[upper, lower])?;
    Ok((SetValue::Convex(k), SetValue::Convex(l), SetValue::Convex(p), SetValue::Convex(cap)))
}

/// Translation invariance of a central symmetral: over random polytopes K and
/// translations t with |t| ≤ 1, the Hausdorff distance of the symmetrals of
/// K + t and K.
pub fn symmetral_translation_report(kind: Symmetral, cfg: &CheckConfig) -> Result<PropertyReport> {
    if matches!(kind, Symmetral::Chordal | Symmetral::PChordal(_)) {
        return arg("translation check applies to central symmetrals");
    }
    let label = format!("{kind:?}");
    Ok(run(&label, "translation_invariance", cfg, |rng, n, grid, _| {
        let k = random_polytope(n, PolytopeKind::General, rng)?;
        let t = gaussian(n, rng).scale(rng.random_range(0.0..1.0));
        let v = hausdorff_distance(&symmetrize_convex(&k.translate(&t), kind)?, &symmetrize_convex(&k, kind)?, grid)?;
        let mut w = witness(&[&SetValue::Convex(k)]);
        w.insert("translation".into(), json!(t.as_slice()));
        Ok((v, w))
    }))
}

#[cfg(test)]
mod tests {
    use super::super::{make_op, OpParams};
    use super::*;
    use crate::operations::MSet;
    use std::f64::consts::PI;

    fn cfg(samples: usize) -> CheckConfig {
        CheckConfig { samples, resolution: 2000, seed: 1, tol: 5e-3 }
    }

    fn op(name: &str, p: Option<f64>) -> BinaryOp {
        make_op(name, &OpParams { p, ..Default::default() }).unwrap()
    }

    #[test]
    fn minkowski_has_the_expected_properties() {
        let m = op("minkowski", None);
        for prop in [
            Property::ProjectionCovariance,
            Property::GlCovariance,
            Property::Commutativity,
            Property::Associativity,
            Property::Homogeneity,
            Property::Distributivity,
            Property::Identity,
            Property::Monotonicity,
            Property::Valuation,
            Property::SymmetricOutput,
        ] {
            let r = check_property(&m, prop, &cfg(12)).unwrap();
            assert!(r.pass, "{prop:?}: {}", r.max_violation);
            assert!(r.max_violation < 1e-9, "{prop:?}: {}", r.max_violation);
        }
        assert!(check_property(&m, Property::SectionCovariance, &cfg(2)).is_err());
    }

    #[test]
    fn lp_fails_distributivity_with_the_expected_gap() {
        let lp = op("lp", Some(2.0));
        let r = check_property(&lp, Property::Distributivity, &cfg(10)).unwrap();
        assert!(!r.pass);
        // rK +_2 sK = (r² + s²)^{1/2} K on bodies containing o.
        let w = &r.witness;
        let (rr, ss) = (w["r"].as_f64().unwrap(), w["s"].as_f64().unwrap());
        assert!(rr + ss - rr.hypot(ss) > 0.0);
    }

    #[test]
    fn f6_operation_is_not_associative() {
        let r = check_property(&op("ex1", None), Property::Associativity, &cfg(10)).unwrap();
        assert!(!r.pass, "{}", r.max_violation);
    }

    #[test]
    fn ex5555_projection_witness() {
        let ex = op("ex5555", None);
        let half = PI / 2.0;
        let k = SetValue::Convex(
            ConvexBody::from_points(&[&[-0.5, -half], &[0.5, -half], &[0.5, half], &[-0.5, half]]).unwrap(),
        );
        let l = SetValue::Convex(ConvexBody::from_points(&[&[-0.25, 0.0], &[0.25, 0.0]]).unwrap());
        let s = Subspace::line(&Vector::basis(2, 0)).unwrap();
        let grid = crate::geometry::sphere_grid(2, 720, 0).unwrap();
        let v = projection_violation(&ex, &k, &l, &s, &grid).unwrap();
        assert!(v >= (half - 0.75) - 1e-9, "{v}");
    }

    #[test]
    fn m_addition_with_unconditional_convex_m_is_projection_covariant() {
        let m = make_op("m_add", &OpParams::with_m(MSet::lp_ball(2, 1.0).unwrap())).unwrap();
        let r = check_projection_covariance(&m, &cfg(8)).unwrap();
        assert!(r.pass, "{}", r.max_violation);
    }

    #[test]
    fn radial_sums_are_section_covariant_and_ex5_is_not() {
        let r = check_section_covariance(&op("radial", Some(-1.0)), &cfg(10)).unwrap();
        assert!(r.pass, "{}", r.max_violation);
        let r = check_section_covariance(&op("ex5_star", None), &cfg(4)).unwrap();
        assert!(!r.pass);
        let ex3 = op("ex3", None);
        assert!(check_section_covariance(&ex3, &cfg(10)).unwrap().pass);
        assert!(!check_gl_covariance(&ex3, &cfg(10)).unwrap().pass);
    }

    #[test]
    fn ex555_is_not_gl_covariant() {
        assert!(!check_gl_covariance(&op("ex555", None), &cfg(6)).unwrap().pass);
    }

    #[test]
    fn introex_is_projection_covariant_but_lacks_identity() {
        let ex = op("introex", None);
        assert!(check_projection_covariance(&ex, &cfg(10)).unwrap().pass);
        let r = check_algebraic(&ex, Property::Identity, &cfg(10)).unwrap();
        assert!(r.max_violation > 0.1);
    }

    #[test]
    fn quasi_homogeneity_of_sinh_sum_fails() {
        let ex = op("ex2", None);
        assert!(!check_algebraic(&ex, Property::QuasiHomogeneity, &cfg(6)).unwrap().pass);
        assert!(check_algebraic(&op("ex1", None), Property::QuasiHomogeneity, &cfg(6)).unwrap().pass);
    }

    #[test]
    fn central_symmetral_is_translation_invariant_and_p_variant_is_not() {
        let r = symmetral_translation_report(Symmetral::Central, &cfg(10)).unwrap();
        assert!(r.max_violation < 1e-10, "{}", r.max_violation);
        let r = symmetral_translation_report(Symmetral::PCentral(2.0), &cfg(10)).unwrap();
        assert!(r.max_violation >= 1e-3);
    }

    #[test]
    fn reports_are_deterministic() {
        let ex = op("ex4", None);
        let a = check_gl_covariance(&ex, &cfg(6)).unwrap().to_json();
        let b = check_gl_covariance(&ex, &cfg(6)).unwrap().to_json();
        assert_eq!(a, b);
    }
}
