//! JSON, OFF and CSV formats for bodies, star sets, measures and coefficient sets.
//!
//! Output is canonical: object fields keep insertion order, floats are written
//! with 17 significant digits, so equal values always give equal bytes and a
//! written float reads back to the same bits.

use crate::convex::{polar_body, support_on_grid, ConvexBody, Repr};
use crate::error::{Error, Result};
use crate::geometry::{sphere_grid, DirectionGrid, Vector};
use crate::hull::Hull;
use crate::operations::{MSet, SurfaceAreaMeasure};
use crate::star::{radial_on_grid, StarSet};
use serde_json::{json, Map, Value};
use std::fmt::Write as _;
use std::sync::Arc;

fn parse_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse(msg.into()))
}

/// Float with 17 significant digits, or a quoted inf/-inf/nan.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "\"nan\"".into()
    } else if x.is_infinite() {
        if x > 0.0 { "\"inf\"".into() } else { "\"-inf\"".into() }
    } else {
        format!("{x:.16e}")
    }
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if n.is_u64() || n.is_i64() {
                out.push_str(&n.to_string());
            } else {
                out.push_str(&format_float(n.as_f64().unwrap_or(f64::NAN)));
            }
        }
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
            } else if items.iter().all(is_scalar) {
                out.push('[');
                for (i, x) in items.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    write_value(out, x, indent);
                }
                out.push(']');
            } else {
                out.push_str("[\n");
                for (i, x) in items.iter().enumerate() {
                    pad(out, indent + 1);
                    write_value(out, x, indent + 1);
                    out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
                }
                pad(out, indent);
                out.push(']');
            }
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            out.push_str("{\n");
            for (i, (k, x)) in map.iter().enumerate() {
                pad(out, indent + 1);
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_value(out, x, indent + 1);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            pad(out, indent);
            out.push('}');
        }
    }
}

fn pad(out: &mut String, indent: usize) {
    for _ in 0..indent {
        out.push_str("  ");
    }
}

/// Canonical text of a JSON value, newline terminated.
pub fn to_canonical_json(v: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, v, 0);
    out.push('\n');
    out
}

pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("invalid JSON: {e}")))
}

/// A number, or one of the strings "inf", "-inf", "nan".
pub fn json_f64(v: &Value, what: &str) -> Result<f64> {
    match v {
        Value::Number(n) => n.as_f64().ok_or_else(|| Error::Parse(format!("{what}: not a float"))),
        Value::String(s) => match s.to_ascii_lowercase().as_str() {
            "inf" | "+inf" | "infinity" => Ok(f64::INFINITY),
            "-inf" | "-infinity" => Ok(f64::NEG_INFINITY),
            "nan" => Ok(f64::NAN),
            _ => parse_err(format!("{what}: expected a number, got {s:?}")),
        },
        _ => parse_err(format!("{what}: expected a number")),
    }
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| Error::Parse(format!("missing field {key:?}")))
}

fn usize_field(v: &Value, key: &str) -> Result<usize> {
    field(v, key)?
        .as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| Error::Parse(format!("{key}: expected a nonnegative integer")))
}

fn floats(v: &Value, what: &str) -> Result<Vec<f64>> {
    v.as_array()
        .ok_or_else(|| Error::Parse(format!("{what}: expected an array")))?
        .iter()
        .map(|x| json_f64(x, what))
        .collect()
}

fn points(v: &Value, what: &str) -> Result<Vec<Vector>> {
    v.as_array()
        .ok_or_else(|| Error::Parse(format!("{what}: expected an array of points")))?
        .iter()
        .map(|p| Vector::new(floats(p, what)?))
        .collect()
}

fn floats_json(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|x| json!(x)).collect())
}

fn points_json(ps: &[Vector]) -> Value {
    Value::Array(ps.iter().map(|p| floats_json(p.as_slice())).collect())
}

fn check_dim(v: &Value, dim: usize) -> Result<()> {
    match v.get("dim") {
        None => Ok(()),
        Some(d) if d.as_u64() == Some(dim as u64) => Ok(()),
        Some(d) => parse_err(format!("dim {d} does not match the data (dimension {dim})")),
    }
}

fn repr_tag(v: &Value) -> Result<&str> {
    field(v, "repr")?.as_str().ok_or_else(|| Error::Parse("repr: expected a string".into()))
}

fn sampled_grid(v: &Value) -> Result<Arc<DirectionGrid>> {
    let n = usize_field(v, "dim")?;
    let seed = field(v, "grid_seed")?.as_u64().ok_or_else(|| Error::Parse("grid_seed: expected an integer".into()))?;
    let m = usize_field(v, "resolution")?;
    sphere_grid(n, m, seed).map(Arc::new).map_err(|e| Error::Parse(e.to_string()))
}

/// Reads a vpolytope, ball or support_sampled body.
pub fn body_from_json(v: &Value) -> Result<ConvexBody> {
    let body = match repr_tag(v)? {
        "vpolytope" => ConvexBody::vpolytope(points(field(v, "vertices")?, "vertices")?),
        "ball" => ConvexBody::ball(Vector::new(floats(field(v, "center")?, "center")?)?, json_f64(field(v, "radius")?, "radius")?),
        "support_sampled" => {
            ConvexBody::support_sampled(sampled_grid(v)?, floats(field(v, "values")?, "values")?)
        }
        other => return parse_err(format!("unknown body repr {other:?}")),
    }
    .map_err(|e| Error::Parse(e.to_string()))?;
    check_dim(v, body.dim())?;
    Ok(body)
}

fn sampled_json(tag: &str, grid: &DirectionGrid, values: &[f64]) -> Value {
    let mut m = Map::new();
    m.insert("dim".into(), json!(grid.dim()));
    m.insert("repr".into(), json!(tag));
    m.insert("grid_seed".into(), json!(grid.seed()));
    m.insert("resolution".into(), json!(grid.resolution()));
    m.insert("values".into(), floats_json(values));
    Value::Object(m)
}

/// Polytopes and balls are written exactly, anything else as support values
/// on `grid`. Sampled bodies keep their own grid.
pub fn body_to_json(k: &ConvexBody, grid: &DirectionGrid) -> Value {
    let mut m = Map::new();
    match k.repr() {
        Repr::VPolytope(p) => {
            m.insert("dim".into(), json!(k.dim()));
            m.insert("repr".into(), json!("vpolytope"));
            // Sorted so the text does not depend on hull traversal order.
            let mut verts = p.vertices().to_vec();
            verts.sort_by(|a, b| {
                a.as_slice().iter().zip(b.as_slice()).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal)
            });
            m.insert("vertices".into(), points_json(&verts));
        }
        Repr::Ball { center, radius } => {
            m.insert("dim".into(), json!(k.dim()));
            m.insert("repr".into(), json!("ball"));
            m.insert("center".into(), floats_json(center.as_slice()));
            m.insert("radius".into(), json!(radius));
        }
        Repr::SupportSampled { grid, values } => return sampled_json("support_sampled", grid, values),
        _ => return sampled_json("support_sampled", grid, &support_on_grid(k, grid)),
    }
    Value::Object(m)
}

/// Reads a radial_sampled set, or a body in any convex format (which must
/// contain o). `grid` supplies radial values for bodies without an exact route.
pub fn star_from_json(v: &Value, grid: impl FnOnce(usize) -> Result<Arc<DirectionGrid>>) -> Result<StarSet> {
    if repr_tag(v)? == "radial_sampled" {
        let s = StarSet::radial_sampled(sampled_grid(v)?, floats(field(v, "values")?, "values")?)
            .map_err(|e| Error::Parse(e.to_string()))?;
        check_dim(v, s.dim())?;
        return Ok(s);
    }
    let body = body_from_json(v)?;
    let g = grid(body.dim())?;
    StarSet::from_convex(body, g)
}

/// Convex-backed sets are written in their body format, anything else as
/// radial values on `grid`.
pub fn star_to_json(s: &StarSet, grid: &DirectionGrid) -> Value {
    if let Some(k) = s.as_convex() {
        return body_to_json(k, grid);
    }
    match s.as_sampled() {
        Some((g, values)) => sampled_json("radial_sampled", g, values),
        None => sampled_json("radial_sampled", grid, &radial_on_grid(s, grid)),
    }
}

pub fn measure_from_json(v: &Value) -> Result<SurfaceAreaMeasure> {
    let n = usize_field(v, "dim")?;
    let atoms = field(v, "atoms")?
        .as_array()
        .ok_or_else(|| Error::Parse("atoms: expected an array".into()))?
        .iter()
        .map(|a| Ok((Vector::new(floats(field(a, "normal")?, "normal")?)?, json_f64(field(a, "area")?, "area")?)))
        .collect::<Result<Vec<_>>>()?;
    SurfaceAreaMeasure::new(n, atoms).map_err(|e| Error::Parse(e.to_string()))
}

pub fn measure_to_json(mu: &SurfaceAreaMeasure) -> Value {
    let atoms = mu
        .atoms()
        .iter()
        .map(|(u, a)| {
            let mut m = Map::new();
            m.insert("normal".into(), floats_json(u.as_slice()));
            m.insert("area".into(), json!(a));
            Value::Object(m)
        })
        .collect();
    let mut m = Map::new();
    m.insert("dim".into(), json!(mu.dim()));
    m.insert("atoms".into(), Value::Array(atoms));
    Value::Object(m)
}

/// {"kind":"polytope","points":[...]} | {"kind":"lp_curve","p":P} |
/// {"kind":"box","m":m} | {"kind":"simplex","m":m} | {"kind":"lp_ball","m":m,"q":q}.
pub fn mset_from_json(v: &Value) -> Result<MSet> {
    let kind = field(v, "kind")?.as_str().ok_or_else(|| Error::Parse("kind: expected a string".into()))?;
    let m = match kind {
        "polytope" => MSet::polytope(points(field(v, "points")?, "points")?),
        "lp_curve" => MSet::lp_curve(json_f64(field(v, "p")?, "p")?),
        "box" => Ok(MSet::Box { m: usize_field(v, "m")? }),
        "simplex" => Ok(MSet::Simplex { m: usize_field(v, "m")? }),
        "lp_ball" => MSet::lp_ball(usize_field(v, "m")?, json_f64(field(v, "q")?, "q")?),
        other => return parse_err(format!("unknown coefficient set kind {other:?}")),
    };
    m.map_err(|e| Error::Parse(e.to_string()))
}

fn param(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        json!(if x > 0.0 { "inf" } else { "-inf" })
    }
}

pub fn mset_to_json(m: &MSet) -> Value {
    match m {
        MSet::Polytope(b) => json!({
            "kind": "polytope",
            "points": points_json(b.as_vpolytope().expect("polytope coefficient set").vertices()),
        }),
        MSet::LpCurve { p } => json!({"kind": "lp_curve", "p": param(*p)}),
        MSet::Box { m } => json!({"kind": "box", "m": m}),
        MSet::Simplex { m } => json!({"kind": "simplex", "m": m}),
        MSet::LpBall { m, q } => json!({"kind": "lp_ball", "m": m, "q": param(*q)}),
    }
}

/// Which polytope an OFF export describes for a body that is not a polytope.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Approximation {
    /// conv{ρ(u)u : u in the grid} ⊆ K.
    Inner,
    /// ∩{x : x·u ≤ h(u)} ⊇ K.
    Outer,
}

fn off_polytope(hull: &Hull) -> Result<String> {
    if hull.dim() != 3 || !hull.is_full_dim() {
        return Err(Error::Argument("OFF export needs a full-dimensional polytope in R³".into()));
    }
    let verts = hull.vertices();
    let tol = 1e-9 * hull.scale().max(1.0);
    let mut faces: Vec<Vec<usize>> = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for f in hull.facets() {
        let on: Vec<usize> = (0..verts.len()).filter(|&i| (verts[i].dot(f.normal.as_slice()) - f.offset).abs() <= tol).collect();
        if on.len() < 3 {
            continue;
        }
        // Order counterclockwise seen from outside.
        let c: Vec<f64> = (0..3).map(|d| on.iter().map(|&i| verts[i][d]).sum::<f64>() / on.len() as f64).collect();
        let nrm = f.normal.as_slice();
        let e1 = Vector::raw(verts[on[0]].sub(&c).into_vec()).normalized().expect("facet vertex off centroid");
        let e2 = [
            nrm[1] * e1[2] - nrm[2] * e1[1],
            nrm[2] * e1[0] - nrm[0] * e1[2],
            nrm[0] * e1[1] - nrm[1] * e1[0],
        ];
        let mut ordered: Vec<(f64, usize)> = on
            .iter()
            .map(|&i| {
                let d = verts[i].sub(&c);
                (d.dot(&e2).atan2(d.dot(e1.as_slice())), i)
            })
            .collect();
        ordered.sort_by(|a, b| a.0.total_cmp(&b.0));
        let face: Vec<usize> = ordered.into_iter().map(|(_, i)| i).collect();
        // Coplanar hull triangles share one polygon.
        let mut key = face.clone();
        key.sort_unstable();
        if seen.insert(key) {
            faces.push(face);
        }
    }
    let mut out = format!("OFF\n{} {} 0\n", verts.len(), faces.len());
    for v in verts {
        let _ = writeln!(out, "{} {} {}", format_float(v[0]), format_float(v[1]), format_float(v[2]));
    }
    for f in &faces {
        let idx: Vec<String> = f.iter().map(|i| i.to_string()).collect();
        let _ = writeln!(out, "{} {}", f.len(), idx.join(" "));
    }
    Ok(out)
}

/// OFF text for a body in R³. Polytopes are exact; other bodies (which must
/// contain o in their interior) use the requested approximation on `grid`.
pub fn body_to_off(k: &ConvexBody, approx: Approximation, grid: &Arc<DirectionGrid>) -> Result<String> {
    if k.dim() != 3 || grid.dim() != 3 {
        return Err(Error::Argument("OFF export is for bodies in R³".into()));
    }
    if let Some(p) = k.as_vpolytope() {
        return match p.hull() {
            Some(h) => off_polytope(h),
            None => Err(Error::Argument("OFF export needs a full-dimensional polytope in R³".into())),
        };
    }
    let h = support_on_grid(k, grid);
    if let Some(i) = h.iter().position(|x| *x <= 1e-12) {
        return Err(Error::Domain(format!(
            "OFF approximation needs o in the interior (support {:e} in direction {:?})",
            h[i],
            grid.directions()[i].as_slice()
        )));
    }
    let poly = match approx {
        Approximation::Inner => {
            let star = StarSet::from_convex(k.clone(), grid.clone())?;
            let rho = radial_on_grid(&star, grid);
            ConvexBody::vpolytope(grid.directions().iter().zip(&rho).map(|(u, r)| u.scale(*r)).collect())?
        }
        Approximation::Outer => {
            let dual = ConvexBody::vpolytope(grid.directions().iter().zip(&h).map(|(u, v)| u.scale(1.0 / v)).collect())?;
            polar_body(&dual, grid)?
        }
    };
    body_to_off(&poly, approx, grid)
}

/// CSV with one row per grid direction: u₁,…,uₙ,value.
pub fn samples_csv(grid: &DirectionGrid, values: &[f64], label: &str) -> String {
    let mut out = String::new();
    let head: Vec<String> = (1..=grid.dim()).map(|i| format!("u{i}")).collect();
    let _ = writeln!(out, "{},{label}", head.join(","));
    for (u, v) in grid.directions().iter().zip(values) {
        let row: Vec<String> = u.as_slice().iter().chain([v]).map(|x| format!("{x:.16e}")).collect();
        let _ = writeln!(out, "{}", row.join(","));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convex::volume_convex;
    use proptest::prelude::*;

    #[test]
    fn canonical_text_is_stable() {
        let v = json!({"b": 1, "a": [0.5, -2.0], "c": {"x": "inf", "y": []}, "d": [[1.0], [2.0]]});
        let s = to_canonical_json(&v);
        assert!(s.starts_with("{\n  \"b\": 1,\n  \"a\": [5.0000000000000000e-1, -2.0000000000000000e0],"));
        assert_eq!(to_canonical_json(&parse_json(&s).unwrap()), s);
    }

    #[test]
    fn body_formats_parse() {
        let sq = parse_json(r#"{"dim":2,"repr":"vpolytope","vertices":[[0,0],[1,0],[1,1],[0,1]]}"#).unwrap();
        let k = body_from_json(&sq).unwrap();
        assert_eq!(k.support(&[1.0, 1.0]), 2.0);
        let b = body_from_json(&parse_json(r#"{"repr":"ball","center":[0,0,1],"radius":2}"#).unwrap()).unwrap();
        assert_eq!(b.dim(), 3);
        assert_eq!(b.support(&[0.0, 0.0, 1.0]), 3.0);
        let bad = parse_json(r#"{"dim":3,"repr":"vpolytope","vertices":[[0,0]]}"#).unwrap();
        assert!(matches!(body_from_json(&bad), Err(Error::Parse(_))));
        let unknown = parse_json(r#"{"repr":"hpolytope"}"#).unwrap();
        assert!(matches!(body_from_json(&unknown), Err(Error::Parse(_))));
    }

    #[test]
    fn measure_and_mset_round_trip() {
        let mu = SurfaceAreaMeasure::new(
            2,
            vec![
                (Vector::new(vec![1.0, 0.0]).unwrap(), 1.0),
                (Vector::new(vec![-1.0, 0.0]).unwrap(), 1.0),
                (Vector::new(vec![0.0, 1.0]).unwrap(), 2.0),
                (Vector::new(vec![0.0, -1.0]).unwrap(), 2.0),
            ],
        )
        .unwrap();
        let text = to_canonical_json(&measure_to_json(&mu));
        let back = measure_from_json(&parse_json(&text).unwrap()).unwrap();
        assert_eq!(back.atoms(), mu.atoms());
        for m in [MSet::lp_curve(f64::INFINITY).unwrap(), MSet::lp_ball(3, 1.5).unwrap(), MSet::Box { m: 2 }] {
            let text = to_canonical_json(&mset_to_json(&m));
            let again = to_canonical_json(&mset_to_json(&mset_from_json(&parse_json(&text).unwrap()).unwrap()));
            assert_eq!(text, again);
        }
    }

    #[test]
    fn cube_off_has_six_quads() {
        let off = body_to_off(&ConvexBody::cube(3, 1.0), Approximation::Inner, &Arc::new(sphere_grid(3, 100, 0).unwrap()))
            .unwrap();
        let mut lines = off.lines();
        assert_eq!(lines.next(), Some("OFF"));
        assert_eq!(lines.next(), Some("8 6 0"));
        assert_eq!(off.lines().filter(|l| l.starts_with("4 ")).count(), 6);
    }

    #[test]
    fn ball_approximations_bracket_the_ball() {
        let g = Arc::new(sphere_grid(3, 400, 0).unwrap());
        let vol = |approx| {
            let off = body_to_off(&ConvexBody::unit_ball(3), approx, &g).unwrap();
            let pts: Vec<Vector> = off
                .lines()
                .skip(2)
                .take_while(|l| l.split_whitespace().count() == 3 && l.contains('e'))
                .map(|l| Vector::new(l.split_whitespace().map(|x| x.parse().unwrap()).collect()).unwrap())
                .collect();
            volume_convex(&ConvexBody::vpolytope(pts).unwrap(), &g).unwrap()
        };
        let exact = 4.0 / 3.0 * std::f64::consts::PI;
        let (inner, outer) = (vol(Approximation::Inner), vol(Approximation::Outer));
        assert!(inner < exact && exact < outer, "{inner} {outer}");
        assert!(outer - inner < 0.2);
    }

    #[test]
    fn csv_has_a_row_per_direction() {
        let g = sphere_grid(2, 8, 0).unwrap();
        let csv = samples_csv(&g, &support_on_grid(&ConvexBody::unit_ball(2), &g), "support");
        assert_eq!(csv.lines().count(), 9);
        assert!(csv.starts_with("u1,u2,support\n"));
    }

    proptest! {
        #[test]
        fn sampled_bodies_round_trip_bit_exactly(seed in 0u64..50, n in 2usize..=3, m in 10usize..60) {
            let g = Arc::new(sphere_grid(n, m, seed).unwrap());
            let k = crate::harness::random_polytope(
                n,
                crate::harness::PolytopeKind::General,
                &mut <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed),
            )
            .unwrap();
            let values = support_on_grid(&k, &g);
            let sampled = ConvexBody::support_sampled(g.clone(), values.clone()).unwrap();
            let text = to_canonical_json(&body_to_json(&sampled, &g));
            let back = body_from_json(&parse_json(&text).unwrap()).unwrap();
            let before = support_on_grid(&sampled, &g);
            let again = support_on_grid(&back, &g);
            prop_assert!(before.iter().zip(&again).all(|(a, b)| a.to_bits() == b.to_bits()));
            // Exact formats too.
            let text = to_canonical_json(&body_to_json(&k, &g));
            let back = body_from_json(&parse_json(&text).unwrap()).unwrap();
            let again = support_on_grid(&back, &g);
            prop_assert!(values.iter().zip(&again).all(|(a, b)| a.to_bits() == b.to_bits()));
            prop_assert_eq!(to_canonical_json(&body_to_json(&back, &g)), text);
        }

        #[test]
        fn radial_samples_round_trip_bit_exactly(seed in 0u64..50, m in 10usize..60) {
            let g = Arc::new(sphere_grid(3, m, seed).unwrap());
            let values: Vec<f64> = (0..g.len()).map(|i| 0.5 + ((i as f64 + seed as f64) * 0.7).sin().abs()).collect();
            let s = StarSet::radial_sampled(g.clone(), values.clone()).unwrap();
            let text = to_canonical_json(&star_to_json(&s, &g));
            let back = star_from_json(&parse_json(&text).unwrap(), |_| unreachable!()).unwrap();
            let stored = back.as_sampled().unwrap().1;
            prop_assert!(stored.iter().zip(&values).all(|(a, b)| a.to_bits() == b.to_bits()));
            let before = radial_on_grid(&s, &g);
            prop_assert!(radial_on_grid(&back, &g).iter().zip(&before).all(|(a, b)| a.to_bits() == b.to_bits()));
        }
    }
}
