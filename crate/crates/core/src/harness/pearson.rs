//! Two-variable functions: a Pearson-form classifier for continuous,
//! homogeneous, associative functions, and a Mulholland inequality check.

use super::{number, PropertyReport};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use std::fmt;
use std::sync::Arc;

type Fn2 = dyn Fn(f64, f64) -> f64 + Send + Sync;
type Fn1 = dyn Fn(f64) -> f64 + Send + Sync;

/// A function f: [0,∞)² → [0,∞).
#[derive(Clone)]
pub struct AssocFunction {
    pub name: String,
    f: Arc<Fn2>,
}

impl fmt::Debug for AssocFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AssocFunction({})", self.name)
    }
}

impl AssocFunction {
    pub fn new(name: &str, f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        AssocFunction { name: name.to_string(), f: Arc::new(f) }
    }

    pub fn eval(&self, s: f64, t: f64) -> f64 {
        (self.f)(s, t)
    }

    /// (s^p + t^p)^{1/p}; p = ∞ is max, p = −∞ is min, and p < 0 vanishes on
    /// the axes.
    pub fn p_mean(p: f64) -> Self {
        AssocFunction::new(&format!("p_mean({p})"), move |s, t| p_mean(p, s, t))
    }

    /// log(e^s + e^t − 1).
    pub fn f1() -> Self {
        AssocFunction::new("f1", |s, t| (s.exp() + t.exp() - 1.0).ln())
    }

    /// min when both are positive, max otherwise.
    pub fn f2() -> Self {
        AssocFunction::new("f2", |s, t| if s > 0.0 && t > 0.0 { s.min(t) } else { s.max(t) })
    }

    pub fn f3() -> Self {
        AssocFunction::new("f3", |_, t| t)
    }

    pub fn f4() -> Self {
        AssocFunction::new("f4", f64::min)
    }

    /// s + t + √(st).
    pub fn f5() -> Self {
        AssocFunction::new("f5", |s, t| s + t + (s * t).sqrt())
    }

    /// ½(s + t) + ½(s² + t²)^{1/2}.
    pub fn f6() -> Self {
        AssocFunction::new("f6", |s, t| 0.5 * (s + t) + 0.5 * s.hypot(t))
    }
}

fn p_mean(p: f64, s: f64, t: f64) -> f64 {
    if p == f64::INFINITY {
        s.max(t)
    } else if p == f64::NEG_INFINITY {
        s.min(t)
    } else if p < 0.0 {
        if s <= 0.0 || t <= 0.0 {
            0.0
        } else {
            let (lo, hi) = (s.min(t), s.max(t));
            lo * (1.0 + (hi / lo).powf(p)).powf(1.0 / p)
        }
    } else {
        let top = s.max(t);
        if top == 0.0 {
            0.0
        } else {
            top * ((s / top).powf(p) + (t / top).powf(p)).powf(1.0 / p)
        }
    }
}

/// Result of `classify_assoc_function`.
#[derive(Clone, Debug, PartialEq)]
pub enum Classification {
    Zero,
    Left,
    Right,
    /// (s^p + t^p)^{1/p} with 0 < p ≤ ∞ (p = ∞ is max).
    Lp { p: f64 },
    /// The p < 0 form, zero on the axes.
    LpZeroBoundary { p: f64 },
    Min,
    /// A Pearson hypothesis failed, or no Pearson form fits.
    NotPearson { violated: String, witness: Vec<f64>, violation: f64 },
}

impl Classification {
    pub fn label(&self) -> String {
        match self {
            Classification::Zero => "zero".into(),
            Classification::Left => "left".into(),
            Classification::Right => "right".into(),
            Classification::Lp { p } if p.is_infinite() => "L_p(p=inf)".into(),
            Classification::Lp { p } => format!("L_p(p={p})"),
            Classification::LpZeroBoundary { p } => format!("L_p-zero-boundary(p={p})"),
            Classification::Min => "min".into(),
            Classification::NotPearson { violated, .. } => format!("not in Pearson class: {violated} violated"),
        }
    }
}

fn rel(a: f64, b: f64) -> f64 {
    let d = (a - b).abs();
    if d == 0.0 {
        0.0
    } else {
        d / 1f64.max(a.abs()).max(b.abs())
    }
}

/// Probe points in [0,3]², a third of them on the axes.
fn probes(rng: &mut ChaCha8Rng, count: usize) -> Vec<(f64, f64)> {
    (0..count)
        .map(|i| {
            let s = rng.random_range(0.0..3.0);
            let t = rng.random_range(0.0..3.0);
            match i % 6 {
                0 => (0.0, t),
                1 => (s, 0.0),
                _ => (s, t),
            }
        })
        .collect()
}

/// Checks homogeneity, associativity and continuity on `samples` seeded probe
/// points (in that order), then fits each Pearson form and returns the one
/// with the lowest held-out error. p for the p-means is estimated from
/// f(1,1) = 2^{1/p} and refined by least squares on f(1,t).
pub fn classify_assoc_function(f: &AssocFunction, samples: usize, tol: f64) -> Classification {
    let samples = samples.max(12);
    let mut rng = ChaCha8Rng::seed_from_u64(0x9ea5);
    let pts = probes(&mut rng, samples);
    let not = |what: &str, witness: Vec<f64>, violation: f64| Classification::NotPearson {
        violated: what.to_string(),
        witness,
        violation,
    };

    let mut worst = (0.0, vec![]);
    for &(s, t) in &pts {
        let lam = rng.random_range(0.1..10.0);
        let v = rel(f.eval(lam * s, lam * t), lam * f.eval(s, t));
        if v > worst.0 {
            worst = (v, vec![s, t, lam]);
        }
    }
    if worst.0 > tol {
        return not("homogeneity", worst.1, worst.0);
    }

    let mut worst = (0.0, vec![]);
    for w in pts.windows(2) {
        let (a, b, c) = (w[0].0, w[0].1, w[1].0);
        let v = rel(f.eval(f.eval(a, b), c), f.eval(a, f.eval(b, c)));
        if v > worst.0 {
            worst = (v, vec![a, b, c]);
        }
    }
    if worst.0 > tol {
        return not("associativity", worst.1, worst.0);
    }

    // A jump that survives a 1e−12 perturbation is a discontinuity.
    let mut worst = (0.0, vec![]);
    for &(s, t) in &pts {
        let v = rel(f.eval(s + 1e-12, t + 1e-12), f.eval(s, t));
        if v > worst.0 {
            worst = (v, vec![s, t]);
        }
    }
    if worst.0 > 1e-3 {
        return not("continuity", worst.1, worst.0);
    }

    let held_out = probes(&mut rng, samples);
    let cv = |g: &dyn Fn(f64, f64) -> f64| held_out.iter().map(|&(s, t)| rel(f.eval(s, t), g(s, t))).fold(0.0, f64::max);

    let mut candidates: Vec<(Classification, f64)> = vec![
        (Classification::Zero, cv(&|_, _| 0.0)),
        (Classification::Left, cv(&|s, _| s)),
        (Classification::Right, cv(&|_, t| t)),
        (Classification::Min, cv(&|s, t| s.min(t))),
        (Classification::Lp { p: f64::INFINITY }, cv(&|s, t| s.max(t))),
    ];
    let c = f.eval(1.0, 1.0);
    if c > 0.0 && (c.ln()).abs() > 1e-12 {
        let p = refine_p(f, 2f64.ln() / c.ln());
        let err = cv(&|s, t| p_mean(p, s, t));
        candidates.push((if p > 0.0 { Classification::Lp { p } } else { Classification::LpZeroBoundary { p } }, err));
    }
    // Ties go to the earlier (simpler) candidate.
    let (best, err) = candidates
        .into_iter()
        .fold(None::<(Classification, f64)>, |acc, (c, e)| match acc {
            Some((bc, be)) if be <= e => Some((bc, be)),
            _ => Some((c, e)),
        })
        .expect("candidates");
    if err > tol {
        return not("Pearson form", vec![], err);
    }
    best
}

/// Golden-section refinement of p on Σ (f(1,t) − m_p(1,t))² over t ∈ [0.05, 20],
/// keeping the initial estimate unless the refinement lowers the residual.
fn refine_p(f: &AssocFunction, p0: f64) -> f64 {
    let ts: Vec<f64> = (0..40).map(|i| 0.05 * 400f64.powf(i as f64 / 39.0)).collect();
    let loss = |p: f64| ts.iter().map(|&t| (f.eval(1.0, t) - p_mean(p, 1.0, t)).powi(2)).sum::<f64>();
    let (mut a, mut b) = if p0 > 0.0 { (p0 / 1.5, p0 * 1.5) } else { (p0 * 1.5, p0 / 1.5) };
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - phi * (b - a);
    let mut x2 = a + phi * (b - a);
    let (mut f1, mut f2) = (loss(x1), loss(x2));
    for _ in 0..200 {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = loss(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = loss(x2);
        }
    }
    let p1 = 0.5 * (a + b);
    if loss(p1) < loss(p0) {
        p1
    } else {
        p0
    }
}

/// A continuous, strictly increasing φ with φ(0) = 0.
#[derive(Clone)]
pub struct MonotoneFn {
    pub name: String,
    phi: Arc<Fn1>,
}

impl fmt::Debug for MonotoneFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MonotoneFn({})", self.name)
    }
}

impl MonotoneFn {
    pub fn new(name: &str, phi: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        MonotoneFn { name: name.to_string(), phi: Arc::new(phi) }
    }

    pub fn eval(&self, s: f64) -> f64 {
        (self.phi)(s)
    }

    /// φ⁻¹(y) for y ≥ 0 by bracketing and bisection.
    pub fn inverse(&self, y: f64) -> f64 {
        if y <= 0.0 {
            return 0.0;
        }
        let mut hi = 1.0;
        while self.eval(hi) < y {
            hi *= 2.0;
        }
        let mut lo = 0.0;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.eval(mid) < y {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

/// Checks φ⁻¹(φ(s₁+s₂) + φ(t₁+t₂)) ≤ φ⁻¹(φ(s₁)+φ(t₁)) + φ⁻¹(φ(s₂)+φ(t₂)) on
/// the grid {0, ½, …, 2}⁴ and on `samples` seeded quadruples from [0,3]⁴.
/// The violation is the relative excess of the left side.
pub fn mulholland_check(phi: &MonotoneFn, samples: usize, tol: f64) -> PropertyReport {
    let comb = |a: f64, b: f64| phi.inverse(phi.eval(a) + phi.eval(b));
    let excess = |q: [f64; 4]| {
        let [s1, s2, t1, t2] = q;
        let lhs = comb(s1 + s2, t1 + t2);
        let rhs = comb(s1, t1) + comb(s2, t2);
        ((lhs - rhs) / rhs.max(1.0)).max(0.0)
    };
    let mut quads = Vec::new();
    let coarse = [0.0, 0.5, 1.0, 1.5, 2.0];
    for a in coarse {
        for b in coarse {
            for c in coarse {
                for d in coarse {
                    quads.push([a, b, c, d]);
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x3a11);
    for _ in 0..samples {
        quads.push([(); 4].map(|_| rng.random_range(0.0..3.0)));
    }
    let mut worst = (0.0, [0.0; 4]);
    for q in &quads {
        let v = excess(*q);
        if v > worst.0 {
            worst = (v, *q);
        }
    }
    let witness = json!({ "s1": worst.1[0], "s2": worst.1[1], "t1": worst.1[2], "t2": worst.1[3], "violation": number(worst.0) });
    PropertyReport::new(&phi.name, "mulholland", quads.len(), worst.0, tol, witness)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn recovers_p_means() {
        for p in [1.0, 1.5, 2.0, 7.0, -1.0, -2.5] {
            match classify_assoc_function(&AssocFunction::p_mean(p), 200, 1e-6) {
                Classification::Lp { p: q } | Classification::LpZeroBoundary { p: q } => {
                    assert!((q - p).abs() < 1e-4, "{p} -> {q}")
                }
                other => panic!("{p}: {other:?}"),
            }
        }
        assert_eq!(
            classify_assoc_function(&AssocFunction::p_mean(f64::INFINITY), 200, 1e-6),
            Classification::Lp { p: f64::INFINITY }
        );
        assert_eq!(classify_assoc_function(&AssocFunction::p_mean(f64::NEG_INFINITY), 200, 1e-6), Classification::Min);
        assert_eq!(classify_assoc_function(&AssocFunction::f3(), 200, 1e-6), Classification::Right);
        assert_eq!(classify_assoc_function(&AssocFunction::f4(), 200, 1e-6), Classification::Min);
        assert_eq!(classify_assoc_function(&AssocFunction::new("zero", |_, _| 0.0), 200, 1e-6), Classification::Zero);
    }

    #[test]
    fn rejects_the_counterexamples_for_the_right_reason() {
        let reason = |f: AssocFunction| match classify_assoc_function(&f, 200, 1e-6) {
            Classification::NotPearson { violated, .. } => violated,
            other => panic!("{other:?}"),
        };
        assert_eq!(reason(AssocFunction::f1()), "homogeneity");
        assert_eq!(reason(AssocFunction::f2()), "continuity");
        assert_eq!(reason(AssocFunction::f5()), "associativity");
        assert_eq!(reason(AssocFunction::f6()), "associativity");
        let label = classify_assoc_function(&AssocFunction::f5(), 200, 1e-6).label();
        assert_eq!(label, "not in Pearson class: associativity violated");
    }

    #[test]
    fn mulholland_examples() {
        let sq = MonotoneFn::new("square", |s| s * s);
        assert!(mulholland_check(&sq, 500, 1e-9).pass);
        let sinh = MonotoneFn::new("sinh", f64::sinh);
        assert!(mulholland_check(&sinh, 500, 1e-9).pass);
        let root = MonotoneFn::new("sqrt", f64::sqrt);
        let r = mulholland_check(&root, 500, 1e-9);
        assert!(!r.pass);
        // (1,0,0,1): LHS (1+1)² = 4 against RHS 1 + 1.
        assert!(r.max_violation >= 0.5);
    }

    proptest! {
        #[test]
        fn p_means_are_homogeneous_and_symmetric(p in 1.0f64..10.0, s in 0.0f64..5.0, t in 0.0f64..5.0, r in 0.1f64..10.0) {
            let a = p_mean(p, r * s, r * t);
            prop_assert!((a - r * p_mean(p, s, t)).abs() <= 1e-12 * a.max(1.0));
            prop_assert_eq!(p_mean(p, s, t), p_mean(p, t, s));
            prop_assert!(p_mean(p, s, t) <= s + t + 1e-12);
        }

        #[test]
        fn inverse_round_trips(y in 0.0f64..50.0) {
            let sinh = MonotoneFn::new("sinh", f64::sinh);
            prop_assert!((sinh.inverse(y) - y.asinh()).abs() < 1e-12);
        }
    }
}
