//! Closed-form equilibria of the nondimensional model and the
//! positivity conditions for the interior one.

use crate::model::{rhs_rescaled, OriginalParams, RescaledParams, StateVector};

/// Components below this are treated as zero when deciding existence.
const POSITIVITY_EPS: f64 = 1e-12;

/// All equilibria of the rescaled system.
#[derive(Debug, Clone)]
pub struct EquilibriumSet {
    /// origin
    pub e0: StateVector,
    /// prey-only point (1, 0, 0)
    pub e1: StateVector,
    /// planar (z = 0) equilibrium with its theta = ab/(c-b)
    pub e2: Option<(StateVector, f64)>,
    pub e_star: Option<StateVector>,
    /// the rejected minus square-root branch also gives a positive
    /// triple; uniqueness of the interior point is then questionable
    pub minus_branch_positive: bool,
}

/// E0, E1 and (when it exists) the planar equilibrium E2.
pub fn boundary_equilibria(rp: &RescaledParams) -> EquilibriumSet {
    let e2 = if rp.c > rp.b {
        let theta = rp.a * rp.b / (rp.c - rp.b);
        if theta > 0.0 && theta < 1.0 {
            let y = (1.0 - theta) * (rp.a + theta);
            Some((StateVector::rescaled(theta, y, 0.0), theta))
        } else {
            None
        }
    } else {
        None
    };
    let (e_star, minus_branch_positive) = interior_branches(rp);
    EquilibriumSet {
        e0: StateVector::rescaled(0.0, 0.0, 0.0),
        e1: StateVector::rescaled(1.0, 0.0, 0.0),
        e2,
        e_star,
        minus_branch_positive,
    }
}

fn interior_from_x(rp: &RescaledParams, x: f64, y: f64) -> Option<StateVector> {
    let z = (-rp.b + rp.c * x / (rp.a + x)) * (y + rp.d);
    if x > POSITIVITY_EPS && y > POSITIVITY_EPS && z > POSITIVITY_EPS {
        Some(StateVector::rescaled(x, y, z))
    } else {
        None
    }
}

fn interior_branches(rp: &RescaledParams) -> (Option<StateVector>, bool) {
    let y = rp.q / rp.p - rp.r;
    let half = (1.0 + rp.a) / 2.0;
    let radicand = half * half - y;
    if radicand < 0.0 {
        return (None, false);
    }
    let root = radicand.sqrt();
    let plus = interior_from_x(rp, (1.0 - rp.a) / 2.0 + root, y);
    let minus = interior_from_x(rp, (1.0 - rp.a) / 2.0 - root, y);
    (plus, minus.is_some())
}

/// Interior equilibrium from the plus square-root branch, if its three
/// components are strictly positive.
pub fn interior_equilibrium(rp: &RescaledParams) -> Option<StateVector> {
    interior_branches(rp).0
}

/// The three lower bounds on the prey growth rate plus the two rate
/// premises that together decide interior-equilibrium existence.
#[derive(Debug, Clone, Copy)]
pub struct ExistenceThresholds {
    pub t1: f64,
    pub t2: f64,
    pub t3: f64,
    /// v3 > d3 c3
    pub premise_growth: bool,
    /// v1 > a1
    pub premise_conversion: bool,
    /// a0 exceeds all three thresholds and both premises hold
    pub verdict: bool,
}

/// Positivity conditions for the interior equilibrium in terms of the
/// original parameters.
pub fn interior_existence_thresholds(op: &OriginalParams) -> ExistenceThresholds {
    let premise_growth = op.v3 > op.d3 * op.c3;
    let premise_conversion = op.v1 > op.a1;
    let excess = op.v3 / op.c3 - op.d3;
    let t1 = op.b0 * op.d0;
    let t2 = if excess >= 0.0 {
        2.0 * (op.b0 * op.v0 * excess).sqrt() - op.b0 * op.d0
    } else {
        f64::NAN
    };
    let t3 = if op.v1 != op.a1 {
        op.b0 * op.d0 * op.a1 / (op.v1 - op.a1)
            + op.v0 / (op.d0 * op.v1) * excess * (op.v1 - op.a1)
    } else {
        f64::NAN
    };
    let verdict = premise_growth
        && premise_conversion
        && op.a0 > t1.max(t2).max(t3);
    ExistenceThresholds {
        t1,
        t2,
        t3,
        premise_growth,
        premise_conversion,
        verdict,
    }
}

/// Euclidean norm of the rescaled vector field at `s`.
pub fn residual(rp: &RescaledParams, s: &StateVector) -> f64 {
    let f = rhs_rescaled(rp, s);
    (f[0] * f[0] + f[1] * f[1] + f[2] * f[2]).sqrt()
}
