//! The tritrophic food-chain model in both coordinate systems, the
//! transformations between them, and the trapping-region check.

use crate::error::{Error, Result};

/// Coordinate system of a state: the raw model or its nondimensional form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Frame {
    Original,
    Rescaled,
}

/// The twelve biological rate and half-saturation parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OriginalParams {
    pub a0: f64,
    pub b0: f64,
    pub v0: f64,
    pub d0: f64,
    pub a1: f64,
    pub v1: f64,
    pub d1: f64,
    pub v2: f64,
    pub d2: f64,
    pub c3: f64,
    pub v3: f64,
    pub d3: f64,
}

impl OriginalParams {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in self.fields() {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidOptions(format!(
                    "parameter {name} must be strictly positive, got {v}"
                )));
            }
        }
        Ok(())
    }

    pub fn fields(&self) -> [(&'static str, f64); 12] {
        [
            ("a0", self.a0),
            ("b0", self.b0),
            ("v0", self.v0),
            ("d0", self.d0),
            ("a1", self.a1),
            ("v1", self.v1),
            ("d1", self.d1),
            ("v2", self.v2),
            ("d2", self.d2),
            ("c3", self.c3),
            ("v3", self.v3),
            ("d3", self.d3),
        ]
    }

    /// Copy with one named parameter replaced; `None` for unknown names.
    pub fn with_value(&self, name: &str, value: f64) -> Option<Self> {
        let mut p = *self;
        match name {
            "a0" => p.a0 = value,
            "b0" => p.b0 = value,
            "v0" => p.v0 = value,
            "d0" => p.d0 = value,
            "a1" => p.a1 = value,
            "v1" => p.v1 = value,
            "d1" => p.d1 = value,
            "v2" => p.v2 = value,
            "d2" => p.d2 = value,
            "c3" => p.c3 = value,
            "v3" => p.v3 = value,
            "d3" => p.d3 = value,
            _ => return None,
        }
        Some(p)
    }
}

/// The seven nondimensional parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RescaledParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub p: f64,
    pub q: f64,
    pub r: f64,
}

impl RescaledParams {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in self.fields() {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidOptions(format!(
                    "parameter {name} must be strictly positive, got {v}"
                )));
            }
        }
        Ok(())
    }

    pub fn fields(&self) -> [(&'static str, f64); 7] {
        [
            ("a", self.a),
            ("b", self.b),
            ("c", self.c),
            ("d", self.d),
            ("p", self.p),
            ("q", self.q),
            ("r", self.r),
        ]
    }
}

/// A nonnegative population triple tagged with its coordinate system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub frame: Frame,
}

impl StateVector {
    pub fn original(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z, frame: Frame::Original }
    }

    pub fn rescaled(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z, frame: Frame::Rescaled }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    fn expect_frame(&self, frame: Frame, op: &str) {
        assert!(
            self.frame == frame,
            "{op} requires a {frame:?}-frame state, got {:?}",
            self.frame
        );
    }
}

/// Right-hand side of the model in original coordinates.
pub fn rhs_original(p: &OriginalParams, s: &StateVector) -> [f64; 3] {
    s.expect_frame(Frame::Original, "rhs_original");
    let (x, y, z) = (s.x, s.y, s.z);
    [
        p.a0 * x - p.b0 * x * x - p.v0 * x * y / (p.d0 + x),
        -p.a1 * y + p.v1 * x * y / (p.d1 + x) - p.v2 * y * z / (p.d2 + y),
        p.c3 * z * z - p.v3 * z * z / (p.d3 + y),
    ]
}

/// Right-hand side of the nondimensional model.
pub fn rhs_rescaled(rp: &RescaledParams, s: &StateVector) -> [f64; 3] {
    s.expect_frame(Frame::Rescaled, "rhs_rescaled");
    let (x, y, z) = (s.x, s.y, s.z);
    [
        x * (1.0 - x) - x * y / (x + rp.a),
        rp.c * x * y / (x + rp.a) - rp.b * y - y * z / (y + rp.d),
        rp.p * z * z - rp.q * z * z / (y + rp.r),
    ]
}

/// Nondimensional parameters induced by the original ones.
pub fn rescale_params(op: &OriginalParams) -> RescaledParams {
    let a0 = op.a0;
    RescaledParams {
        a: op.b0 * op.d0 / a0,
        b: op.a1 / a0,
        c: op.v1 / a0,
        d: op.d2 * op.v0 * op.b0 / (a0 * a0),
        p: op.c3 * a0 * a0 / (op.b0 * op.v0 * op.v2),
        q: op.v3 / op.v2,
        r: op.d3 * op.v0 * op.b0 / (a0 * a0),
    }
}

/// Original-frame state mapped to the nondimensional frame.
pub fn rescale_state(op: &OriginalParams, s: &StateVector) -> StateVector {
    s.expect_frame(Frame::Original, "rescale_state");
    let a0 = op.a0;
    StateVector::rescaled(
        s.x * op.b0 / a0,
        s.y * op.b0 * op.v0 / (a0 * a0),
        s.z * op.b0 * op.v0 * op.v2 / (a0 * a0 * a0),
    )
}

/// Exact inverse of [`rescale_state`].
pub fn unscale_state(op: &OriginalParams, s: &StateVector) -> StateVector {
    s.expect_frame(Frame::Rescaled, "unscale_state");
    let a0 = op.a0;
    StateVector::original(
        s.x * a0 / op.b0,
        s.y * a0 * a0 / (op.b0 * op.v0),
        s.z * a0 * a0 * a0 / (op.b0 * op.v0 * op.v2),
    )
}

/// Outcome of the trapping-region test.
#[derive(Debug, Clone, Copy)]
pub struct InvarianceReport {
    /// c + c/4b + r < q/p
    pub condition_holds: bool,
    /// alpha = 1 / (b^2 (c + c/4b + r)); always defined
    pub alpha: f64,
    /// M = 1 / (4 (q - (c + c/4b + r) p)); defined only when the
    /// condition holds
    pub m_bound: Option<f64>,
    /// upper bounds of the three nested plane constraints:
    /// x <= bound[0], x + y/c <= bound[1], x + y/c + alpha z <= bound[2]
    pub bounds: [f64; 3],
}

/// Evaluates the boundedness condition and the trapping-set constants.
pub fn invariance_check(rp: &RescaledParams) -> InvarianceReport {
    let s = rp.c + rp.c / (4.0 * rp.b) + rp.r;
    let condition_holds = s < rp.q / rp.p;
    let alpha = 1.0 / (rp.b * rp.b * s);
    let m_bound = if condition_holds {
        Some(1.0 / (4.0 * (rp.q - s * rp.p)))
    } else {
        None
    };
    let b1 = 1.0;
    let b2 = 1.0 + 1.0 / (4.0 * rp.b);
    let b3 = b2 + m_bound.map_or(f64::NAN, |m| m / rp.b);
    InvarianceReport {
        condition_holds,
        alpha,
        m_bound,
        bounds: [b1, b2, b3],
    }
}

/// Parameter sets used throughout the tests, benches and docs.
pub mod presets {
    use super::OriginalParams;

    fn base() -> OriginalParams {
        OriginalParams {
            a0: 1.2,
            b0: 0.075,
            v0: 1.0,
            d0: 10.0,
            a1: 1.0,
            v1: 2.0,
            d1: 10.0,
            v2: 0.405,
            d2: 10.0,
            c3: 0.038,
            v3: 1.0,
            d3: 20.0,
        }
    }

    /// Interior equilibrium locally stable for every order m in (0, 1].
    pub fn stable_interior() -> OriginalParams {
        base()
    }

    /// Stable only for m < 2/3 by the sufficient sign conditions; the
    /// direct eigenvalue test extends stability to m = 1.
    pub fn weakly_damped() -> OriginalParams {
        OriginalParams { b0: 0.06, a0: 0.95, ..base() }
    }

    /// Interior equilibrium unstable for m > 2/3.
    pub fn unstable_interior() -> OriginalParams {
        OriginalParams { v1: 10.0, v2: 2.5, a0: 1.5, ..base() }
    }

    /// Satisfies the interior global-stability inequalities.
    pub fn globally_stable() -> OriginalParams {
        OriginalParams { b0: 0.15, v2: 2.5, a0: 2.0, ..base() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn rescale_params_reference_values() {
        let rp = rescale_params(&presets::stable_interior());
        // direct evaluation of the seven transformation formulas
        assert_relative_eq!(rp.a, 0.625, max_relative = 1e-12);
        assert_relative_eq!(rp.b, 0.833333333333, max_relative = 1e-9);
        assert_relative_eq!(rp.c, 1.666666666667, max_relative = 1e-9);
        assert_relative_eq!(rp.d, 0.520833333333, max_relative = 1e-9);
        assert_relative_eq!(rp.p, 1.801481481481, max_relative = 1e-9);
        assert_relative_eq!(rp.q, 2.469135802469, max_relative = 1e-9);
        assert_relative_eq!(rp.r, 1.041666666667, max_relative = 1e-9);

        let rp4 = rescale_params(&presets::globally_stable());
        assert_relative_eq!(rp4.b, 0.5, max_relative = 1e-12);
        assert_relative_eq!(rp4.c, 1.0, max_relative = 1e-12);
        assert_relative_eq!(rp4.d, 0.375, max_relative = 1e-12);
        assert_relative_eq!(rp4.q, 0.4, max_relative = 1e-12);
        assert_relative_eq!(rp4.r, 0.75, max_relative = 1e-12);
        assert_relative_eq!(rp4.p, 0.405333333333, max_relative = 1e-9);
    }

    #[test]
    fn rescale_params_unit_values() {
        let op = OriginalParams {
            a0: 1.0,
            b0: 1.0,
            v0: 1.0,
            d0: 1.0,
            a1: 1.0,
            v1: 1.0,
            d1: 1.0,
            v2: 1.0,
            d2: 1.0,
            c3: 1.0,
            v3: 1.0,
            d3: 3.5,
        };
        let rp = rescale_params(&op);
        assert_eq!(
            (rp.a, rp.b, rp.c, rp.d, rp.p, rp.q, rp.r),
            (1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 3.5)
        );
    }

    #[test]
    fn rhs_original_vanishes_at_equilibrium() {
        let p = presets::stable_interior();
        let s = StateVector::original(12.2081, 6.3158, 4.0056);
        let f = rhs_original(&p, &s);
        for v in f {
            assert!(v.abs() < 1e-3, "residual {v}");
        }
        let zero = rhs_original(&p, &StateVector::original(0.0, 0.0, 0.0));
        assert_eq!(zero, [0.0, 0.0, 0.0]);
    }

    #[test]
    fn rhs_original_hand_evaluated() {
        let p = presets::stable_interior();
        let f = rhs_original(&p, &StateVector::original(1.2, 1.2, 1.2));
        assert_relative_eq!(f[0], 1.20342857, max_relative = 1e-6);
        assert_relative_eq!(f[1], -0.99492857, max_relative = 1e-6);
        assert_relative_eq!(f[2], -0.01320453, max_relative = 1e-5);
    }

    #[test]
    fn rhs_rescaled_fixed_points() {
        let rp = rescale_params(&presets::stable_interior());
        assert_eq!(
            rhs_rescaled(&rp, &StateVector::rescaled(1.0, 0.0, 0.0)),
            [0.0, 0.0, 0.0]
        );
        // planar equilibrium built from theta = ab/(c-b)
        let theta = rp.a * rp.b / (rp.c - rp.b);
        let e2 = StateVector::rescaled(theta, (1.0 - theta) * (rp.a + theta), 0.0);
        for v in rhs_rescaled(&rp, &e2) {
            assert!(v.abs() < 1e-14);
        }
        // interior equilibrium carried over from the original frame
        let e_star = rescale_state(
            &presets::stable_interior(),
            &StateVector::original(12.2081, 6.3158, 4.0056),
        );
        for v in rhs_rescaled(&rp, &e_star) {
            assert!(v.abs() < 1e-6);
        }
    }

    #[test]
    fn rescale_state_reference() {
        let p = presets::stable_interior();
        let s = rescale_state(&p, &StateVector::original(12.2081, 6.3158, 4.0056));
        assert_relative_eq!(s.x, 0.76301, max_relative = 1e-4);
        assert_relative_eq!(s.y, 0.32894, max_relative = 1e-4);
        assert_relative_eq!(s.z, 0.07041, max_relative = 1e-4);
        let origin = rescale_state(&p, &StateVector::original(0.0, 0.0, 0.0));
        assert_eq!(origin.as_array(), [0.0, 0.0, 0.0]);
    }

    #[test]
    #[should_panic(expected = "requires a Original-frame state")]
    fn frame_mixup_is_caught() {
        let p = presets::stable_interior();
        rhs_original(&p, &StateVector::rescaled(0.1, 0.1, 0.1));
    }

    #[test]
    fn invariance_reference_cases() {
        // globally-stable preset: the trapping condition itself fails
        let r4 = invariance_check(&rescale_params(&presets::globally_stable()));
        assert!(!r4.condition_holds);
        assert!(r4.m_bound.is_none());
        assert_relative_eq!(r4.alpha, 1.777777777778, max_relative = 1e-9);

        let r1 = invariance_check(&rescale_params(&presets::stable_interior()));
        assert!(!r1.condition_holds);

        let rp = RescaledParams { a: 1.0, b: 1.0, c: 1.0, d: 1.0, p: 0.1, q: 1.0, r: 0.1 };
        let rep = invariance_check(&rp);
        assert!(rep.condition_holds);
        assert!(rep.alpha > 0.0);
        assert!(rep.m_bound.unwrap() > 0.0);
        assert!(rep.bounds[2].is_finite());
    }

    #[test]
    fn trapping_set_contains_trajectory() {
        use crate::solver::{solve_caputo_pece, FractionalOrder, SolverOptions};
        let rp = RescaledParams { a: 1.0, b: 1.0, c: 1.0, d: 1.0, p: 0.1, q: 1.0, r: 0.1 };
        let rep = invariance_check(&rp);
        assert!(rep.condition_holds);
        let alpha = rep.alpha;
        for m in [0.8, 1.0] {
            let tr = solve_caputo_pece(
                |s| rhs_rescaled(&rp, &StateVector::rescaled(s[0], s[1], s[2])),
                FractionalOrder::new(m).unwrap(),
                [0.5, 0.2, 0.1],
                &SolverOptions::new(0.05, 20.0),
            )
            .unwrap();
            for s in &tr.states {
                assert!(s[0] <= rep.bounds[0] + 1e-6);
                assert!(s[0] + s[1] / rp.c <= rep.bounds[1] + 1e-6);
                assert!(s[0] + s[1] / rp.c + alpha * s[2] <= rep.bounds[2] + 1e-6);
            }
        }
    }

    fn arbitrary_state() -> impl Strategy<Value = [f64; 3]> {
        [0.0f64..30.0, 0.0f64..30.0, 0.0f64..10.0]
    }

    proptest! {
        #[test]
        fn state_round_trip(s in arbitrary_state()) {
            let p = presets::stable_interior();
            let orig = StateVector::original(s[0], s[1], s[2]);
            let back = unscale_state(&p, &rescale_state(&p, &orig));
            for (a, b) in back.as_array().iter().zip(orig.as_array()) {
                prop_assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0));
            }
        }

        #[test]
        fn faces_are_preserved(s in arbitrary_state()) {
            let p = presets::stable_interior();
            let rp = rescale_params(&p);
            let on_x = rhs_rescaled(&rp, &StateVector::rescaled(0.0, s[1], s[2]));
            prop_assert_eq!(on_x[0], 0.0);
            let on_y = rhs_rescaled(&rp, &StateVector::rescaled(s[0], 0.0, s[2]));
            prop_assert_eq!(on_y[1], 0.0);
            let on_z = rhs_rescaled(&rp, &StateVector::rescaled(s[0], s[1], 0.0));
            prop_assert_eq!(on_z[2], 0.0);
        }

        #[test]
        fn frames_are_consistent(s in arbitrary_state()) {
            // chain rule: dX/dT = (state scale) * a0 * dx/dt
            let p = presets::stable_interior();
            let rp = rescale_params(&p);
            let orig = StateVector::original(s[0], s[1], s[2]);
            let f_orig = rhs_original(&p, &orig);
            let f_resc = rhs_rescaled(&rp, &rescale_state(&p, &orig));
            let a0 = p.a0;
            let scales = [
                a0 / p.b0,
                a0 * a0 / (p.b0 * p.v0),
                a0 * a0 * a0 / (p.b0 * p.v0 * p.v2),
            ];
            for i in 0..3 {
                let lhs = f_orig[i] / a0;
                let rhs_v = scales[i] * f_resc[i];
                prop_assert!(
                    (lhs - rhs_v).abs() <= 1e-10 * lhs.abs().max(1e-6),
                    "component {}: {} vs {}", i, lhs, rhs_v
                );
            }
        }
    }
}
