//! o-symmetrizations: difference body, central and chordal symmetrals.

use super::{lp_sum, minkowski_sum, radial_p_sum, LpVariant};
use crate::convex::ConvexBody;
use crate::error::{arg, Result};
use crate::star::StarSet;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Symmetral {
    /// DK = K + (−K).
    Difference,
    /// ΔK = ½K + ½(−K).
    Central,
    /// Δ_pK = ½(K +_p (−K)) with the extended L_p sum, p ≥ 1.
    PCentral(f64),
    /// ½K +~ ½(−K).
    Chordal,
    /// ½(K +~_p (−K)), p ≠ 0.
    PChordal(f64),
}

/// Symmetrals defined on convex bodies.
pub fn symmetrize_convex(k: &ConvexBody, kind: Symmetral) -> Result<ConvexBody> {
    match kind {
        Symmetral::Difference => minkowski_sum(k, &k.reflect()),
        Symmetral::Central => Ok(minkowski_sum(k, &k.reflect())?.scale(0.5)),
        Symmetral::PCentral(p) => {
            if p.is_nan() || p < 1.0 {
                return arg(format!("p-central symmetral needs p ≥ 1, got {p}"));
            }
            if p == 1.0 {
                return symmetrize_convex(k, Symmetral::Central);
            }
            Ok(lp_sum(k, &k.reflect(), p, LpVariant::Extended)?.scale(0.5))
        }
        Symmetral::Chordal | Symmetral::PChordal(_) => arg("chordal symmetrals act on star sets"),
    }
}

/// Symmetrals defined on star sets.
pub fn symmetrize_star(l: &StarSet, kind: Symmetral) -> Result<StarSet> {
    match kind {
        Symmetral::Chordal => Ok(radial_p_sum(l, &l.reflect(), 1.0)?.scale(0.5)),
        Symmetral::PChordal(p) => {
            if p == 0.0 || p.is_nan() {
                return arg("p-chordal symmetral needs p ≠ 0");
            }
            Ok(radial_p_sum(l, &l.reflect(), p)?.scale(0.5))
        }
        _ => arg("central symmetrals act on convex bodies"),
    }
}
