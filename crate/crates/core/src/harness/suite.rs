//! The catalog's predicted property profiles and the scenarios built on them.

use super::{check_property, make_op, BinaryOp, CheckConfig, OpParams, Property, PropertyReport};
use crate::convex::transform_body;
use crate::error::Result;
use crate::geometry::{sphere_grid, LinearMap};
use crate::operations::{cylinder, polar_lp_sum, MSet};
use crate::star::radial_on_grid;
use rayon::prelude::*;
use serde_json::{json, Value};
use std::sync::Arc;

/// An operation with its predicted pass/fail pattern.
#[derive(Clone, Debug)]
pub struct ProfileEntry {
    pub label: String,
    pub op: BinaryOp,
    pub expected: Vec<(Property, bool)>,
}

const CONVEX_PROPS: [Property; 6] = [
    Property::ProjectionCovariance,
    Property::GlCovariance,
    Property::Associativity,
    Property::Identity,
    Property::Distributivity,
    Property::Homogeneity,
];

const STAR_PROPS: [Property; 6] = [
    Property::SectionCovariance,
    Property::GlCovariance,
    Property::Associativity,
    Property::Identity,
    Property::Distributivity,
    Property::Homogeneity,
];

fn entry(label: &str, name: &str, params: OpParams, pattern: [bool; 6]) -> Result<ProfileEntry> {
    let op = make_op(name, &params)?;
    let props = if op.domain().is_star() { STAR_PROPS } else { CONVEX_PROPS };
    Ok(ProfileEntry { label: label.to_string(), op, expected: props.into_iter().zip(pattern).collect() })
}

fn square() -> Result<MSet> {
    MSet::polytope(
        [[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]]
            .iter()
            .map(|p| crate::geometry::Vector::new(p.to_vec()))
            .collect::<Result<_>>()?,
    )
}

/// The catalog with predicted outcomes for (projection or section
/// covariance, GL covariance, associativity, identity, distributivity,
/// homogeneity).
pub fn expected_profile() -> Result<Vec<ProfileEntry>> {
    const T: bool = true;
    const F: bool = false;
    let p = OpParams::with_p;
    let m = OpParams::with_m;
    Ok(vec![
        entry("minkowski", "minkowski", OpParams::default(), [T, T, T, T, T, T])?,
        entry("lp(p=2)", "lp", p(2.0), [T, T, T, T, F, T])?,
        entry("lp(p=inf)", "lp", p(f64::INFINITY), [T, T, T, T, F, T])?,
        entry("m_add(square)", "m_add", m(square()?), [T, T, T, T, T, T])?,
        entry("m_add(disc)", "m_add", m(MSet::lp_ball(2, 2.0)?), [T, T, T, T, F, T])?,
        entry("m_add(l1_ball)", "m_add", m(MSet::lp_ball(2, 1.0)?), [T, T, T, T, F, T])?,
        entry("radial(p=1)", "radial", p(1.0), [T, T, T, T, T, T])?,
        entry("radial(p=2)", "radial", p(2.0), [T, T, T, T, F, T])?,
        entry("radial(p=-1)", "radial", p(-1.0), [T, T, T, F, F, T])?,
        entry("radial(p=inf)", "radial", p(f64::INFINITY), [T, T, T, T, F, T])?,
        entry("radial(p=-inf)", "radial", p(f64::NEG_INFINITY), [T, T, T, F, F, T])?,
        entry("ex2", "ex2", OpParams::default(), [T, T, T, T, F, F])?,
        entry("ex1", "ex1", OpParams::default(), [T, T, F, T, F, T])?,
        entry("ex4", "ex4", OpParams::default(), [F, T, T, T, F, T])?,
        entry("ex5", "ex5", OpParams::default(), [F, F, T, F, F, T])?,
        entry("ex5555", "ex5555", OpParams::default(), [F, F, T, T, F, F])?,
        entry("ex555", "ex555", OpParams::default(), [F, F, F, T, F, F])?,
        entry("introex", "introex", OpParams::default(), [T, T, T, F, F, T])?,
        entry("ex3", "ex3", OpParams::default(), [T, F, T, T, F, T])?,
        entry("ex5_star", "ex5_star", OpParams::default(), [F, F, T, F, F, T])?,
        entry("not_lp(p=1)", "not_lp", p(1.0), [T, T, T, F, F, T])?,
    ])
}

/// Reports with their predictions.
#[derive(Clone, Debug)]
pub struct SuiteResult {
    pub rows: Vec<(PropertyReport, bool)>,
}

impl SuiteResult {
    pub fn mismatches(&self) -> Vec<&PropertyReport> {
        self.rows.iter().filter(|(r, e)| r.pass != *e).map(|(r, _)| r).collect()
    }

    /// Array of report objects, each with an added "expected" field.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|(r, e)| {
                    let mut v = r.to_json();
                    v.as_object_mut().expect("report object").insert("expected".into(), json!(e));
                    v
                })
                .collect(),
        )
    }
}

/// Runs every (operation, property) pair of the profile. Rows come back in
/// profile order whatever the thread schedule.
pub fn run_profile_suite(cfg: &CheckConfig) -> Result<SuiteResult> {
    let entries = expected_profile()?;
    let jobs: Vec<(&ProfileEntry, Property, bool)> =
        entries.iter().flat_map(|e| e.expected.iter().map(move |(p, x)| (e, *p, *x))).collect();
    let rows = jobs
        .par_iter()
        .map(|(e, prop, expected)| {
            let mut r = check_property(&e.op, *prop, cfg)?;
            r.op = e.label.clone();
            Ok((r, *expected))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SuiteResult { rows })
}

/// Polar L_p sums of the cylinders K_m = [−e₁,e₁] + (1/m)D in R³ and their
/// rotations by α in the (x₁,x₃)-plane. Returns (m, max radial value of the
/// sum over the grid); the values tend to 0 as m grows.
pub fn cylinder_scenario(p: f64, alpha: f64, ms: &[usize], resolution: usize) -> Result<Vec<(usize, f64)>> {
    let grid = Arc::new(sphere_grid(3, resolution, 0)?);
    let rot = LinearMap::rotation(3, 0, 2, alpha);
    ms.iter()
        .map(|&m| {
            let k = cylinder(3, 1.0, 1.0 / m as f64)?;
            let l = transform_body(&k, &rot)?;
            let sum = polar_lp_sum(&k, &l, p, &grid)?;
            let star = crate::star::StarSet::from_convex(sum, grid.clone())?;
            Ok((m, radial_on_grid(&star, &grid).into_iter().fold(0.0, f64::max)))
        })
        .collect()
}
