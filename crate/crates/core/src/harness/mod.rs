//! Operation catalog and numerical property checkers.

mod catalog;
mod checks;
mod fit;
mod pearson;
mod sampling;
mod suite;

pub use catalog::{make_op, BinaryOp, Domain, OpParams, CATALOG};
pub use checks::{
    check_algebraic, check_gl_covariance, check_projection_covariance, check_property, check_section_covariance,
    gl_violation, projection_violation, section_violation, symmetral_translation_report,
};
pub use fit::{fit_polynomial_volume, grid_points, HomogeneousFit, PolynomialFit};
pub use pearson::{classify_assoc_function, mulholland_check, AssocFunction, Classification, MonotoneFn};
pub use sampling::{random_linear_map, random_pair, random_polytope, random_set, PolytopeKind};
pub use suite::{cylinder_scenario, expected_profile, run_profile_suite, ProfileEntry, SuiteResult};

use crate::convex::{hausdorff_distance, transform_body, ConvexBody};
use crate::error::{arg, Result};
use crate::geometry::{sphere_grid, DirectionGrid, LinearMap};
use crate::star::{radial_distance, StarSet};
use serde_json::{json, Map, Value};
use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

/// A convex body or a star set, whichever an operation works on.
#[derive(Clone, Debug)]
pub enum SetValue {
    Convex(ConvexBody),
    Star(StarSet),
}

impl SetValue {
    pub fn dim(&self) -> usize {
        match self {
            SetValue::Convex(k) => k.dim(),
            SetValue::Star(s) => s.dim(),
        }
    }

    pub fn as_convex(&self) -> Option<&ConvexBody> {
        match self {
            SetValue::Convex(k) => Some(k),
            SetValue::Star(_) => None,
        }
    }

    pub fn as_star(&self) -> Option<&StarSet> {
        match self {
            SetValue::Star(s) => Some(s),
            SetValue::Convex(_) => None,
        }
    }

    /// Support value for convex bodies, radial value for star sets.
    pub fn value_at(&self, u: &[f64]) -> f64 {
        match self {
            SetValue::Convex(k) => k.support(u),
            SetValue::Star(s) => s.radial_at(u),
        }
    }

    /// rX for r ≥ 0.
    pub fn scale(&self, r: f64) -> SetValue {
        match self {
            SetValue::Convex(k) => SetValue::Convex(k.scale(r)),
            SetValue::Star(s) => SetValue::Star(s.scale(r)),
        }
    }

    pub fn transform(&self, phi: &LinearMap) -> Result<SetValue> {
        Ok(match self {
            SetValue::Convex(k) => SetValue::Convex(transform_body(k, phi)?),
            SetValue::Star(s) => SetValue::Star(s.transform(phi)?),
        })
    }

    /// {o} of the same kind and dimension.
    pub fn origin_like(&self, grids: &GridCache) -> SetValue {
        match self {
            SetValue::Convex(k) => SetValue::Convex(ConvexBody::origin(k.dim())),
            SetValue::Star(s) => SetValue::Star(StarSet::origin(s.dim(), grids.get(s.dim()))),
        }
    }
}

/// Hausdorff distance for convex bodies, radial distance for star sets.
pub fn set_distance(a: &SetValue, b: &SetValue, grid: &DirectionGrid) -> Result<f64> {
    match (a, b) {
        (SetValue::Convex(k), SetValue::Convex(l)) => hausdorff_distance(k, l, grid),
        (SetValue::Star(k), SetValue::Star(l)) => radial_distance(k, l, grid),
        _ => arg("cannot compare a convex body with a star set"),
    }
}

/// Standard direction grids by dimension, built on first use.
#[derive(Debug)]
pub struct GridCache {
    resolution: usize,
    grids: Mutex<BTreeMap<usize, Arc<DirectionGrid>>>,
}

impl GridCache {
    pub fn new(resolution: usize) -> Self {
        GridCache { resolution, grids: Mutex::new(BTreeMap::new()) }
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn get(&self, n: usize) -> Arc<DirectionGrid> {
        let mut map = self.grids.lock().expect("grid cache poisoned");
        map.entry(n)
            .or_insert_with(|| Arc::new(sphere_grid(n, self.resolution, 0).expect("grid for n ≥ 1")))
            .clone()
    }
}

/// Properties the checkers know how to test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Property {
    ProjectionCovariance,
    SectionCovariance,
    GlCovariance,
    Commutativity,
    Associativity,
    Homogeneity,
    QuasiHomogeneity,
    Distributivity,
    Identity,
    Monotonicity,
    Valuation,
    SymmetricOutput,
}

impl Property {
    pub const ALL: [Property; 12] = [
        Property::ProjectionCovariance,
        Property::SectionCovariance,
        Property::GlCovariance,
        Property::Commutativity,
        Property::Associativity,
        Property::Homogeneity,
        Property::QuasiHomogeneity,
        Property::Distributivity,
        Property::Identity,
        Property::Monotonicity,
        Property::Valuation,
        Property::SymmetricOutput,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Property::ProjectionCovariance => "projection_covariance",
            Property::SectionCovariance => "section_covariance",
            Property::GlCovariance => "gl_covariance",
            Property::Commutativity => "commutativity",
            Property::Associativity => "associativity",
            Property::Homogeneity => "homogeneity",
            Property::QuasiHomogeneity => "quasi_homogeneity",
            Property::Distributivity => "distributivity",
            Property::Identity => "identity",
            Property::Monotonicity => "monotonicity",
            Property::Valuation => "valuation",
            Property::SymmetricOutput => "symmetric_output",
        }
    }

    pub fn parse(s: &str) -> Result<Property> {
        Property::ALL
            .iter()
            .find(|p| p.name() == s)
            .copied()
            .map_or_else(|| arg(format!("unknown property '{s}'")), Ok)
    }
}

/// Sample count, grid resolution, seed and tolerance for a randomized check.
#[derive(Clone, Debug)]
pub struct CheckConfig {
    pub samples: usize,
    pub resolution: usize,
    pub seed: u64,
    pub tol: f64,
}

impl Default for CheckConfig {
    /// 100 samples, resolution 10⁴, seed 0, tolerance 5e−3.
    fn default() -> Self {
        CheckConfig { samples: 100, resolution: 10_000, seed: 0, tol: 5e-3 }
    }
}

/// Outcome of a randomized property check. `pass` holds exactly when
/// `max_violation ≤ tol`.
#[derive(Clone, Debug)]
pub struct PropertyReport {
    pub op: String,
    pub property: String,
    pub samples: usize,
    pub max_violation: f64,
    pub tol: f64,
    pub pass: bool,
    pub witness: Value,
}

impl PropertyReport {
    pub fn new(op: &str, property: &str, samples: usize, max_violation: f64, tol: f64, witness: Value) -> Self {
        PropertyReport {
            op: op.to_string(),
            property: property.to_string(),
            samples,
            max_violation,
            tol,
            pass: max_violation <= tol,
            witness,
        }
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("op".into(), json!(self.op));
        m.insert("property".into(), json!(self.property));
        m.insert("samples".into(), json!(self.samples));
        m.insert("max_violation".into(), number(self.max_violation));
        m.insert("pass".into(), json!(self.pass));
        m.insert("witness".into(), self.witness.clone());
        Value::Object(m)
    }
}

/// A JSON number, or the strings "inf", "-inf", "nan" for non-finite values.
pub fn number(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else if x.is_nan() {
        json!("nan")
    } else if x > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}
