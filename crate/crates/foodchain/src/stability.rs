//! Local and global stability analysis: Jacobian, characteristic
//! polynomial, discriminant-based classification, the direct
//! eigenvalue-argument test, the three global-stability inequalities,
//! and the associated Lyapunov function.

use crate::error::{Error, Result};
use crate::model::{RescaledParams, StateVector};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::fmt;

pub type Matrix3 = [[f64; 3]; 3];

/// Analytic Jacobian of the rescaled vector field at a strictly
/// positive point.
pub fn jacobian_at(rp: &RescaledParams, s: &StateVector) -> Matrix3 {
    let (x, y, z) = (s.x, s.y, s.z);
    assert!(
        x > 0.0 && y > 0.0 && z > 0.0,
        "Jacobian requested at a non-interior point"
    );
    let ax = rp.a + x;
    let dy = rp.d + y;
    let ry = rp.r + y;
    [
        [1.0 - 2.0 * x - rp.a * y / (ax * ax), -x / ax, 0.0],
        [
            rp.a * rp.c * y / (ax * ax),
            rp.c * x / ax - rp.b - rp.d * z / (dy * dy),
            -y / dy,
        ],
        [
            0.0,
            rp.q * z * z / (ry * ry),
            2.0 * rp.p * z - 2.0 * rp.q * z / ry,
        ],
    ]
}

/// Coefficients of F(ξ) = ξ³ + A1ξ² + A2ξ + A3 together with the
/// cubic discriminant.
#[derive(Debug, Clone, Copy)]
pub struct CharPoly {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub discriminant: f64,
}

impl CharPoly {
    pub fn new(a1: f64, a2: f64, a3: f64) -> Self {
        let discriminant = 18.0 * a1 * a2 * a3 + (a1 * a2) * (a1 * a2)
            - 4.0 * a3 * a1 * a1 * a1
            - 4.0 * a2 * a2 * a2
            - 27.0 * a3 * a3;
        CharPoly { a1, a2, a3, discriminant }
    }

    pub fn eval(&self, xi: Complex64) -> Complex64 {
        ((xi + self.a1) * xi + self.a2) * xi + self.a3
    }

    fn eval_deriv(&self, xi: Complex64) -> Complex64 {
        (3.0 * xi + 2.0 * self.a1) * xi + self.a2
    }
}

/// A1 = −trace, A2 = sum of principal 2×2 minors, A3 = −det.
pub fn charpoly_coeffs(j: &Matrix3) -> CharPoly {
    let a1 = -(j[0][0] + j[1][1] + j[2][2]);
    let a2 = j[0][0] * j[1][1] - j[0][1] * j[1][0]
        + j[0][0] * j[2][2] - j[0][2] * j[2][0]
        + j[1][1] * j[2][2] - j[1][2] * j[2][1];
    let det = j[0][0] * (j[1][1] * j[2][2] - j[1][2] * j[2][1])
        - j[0][1] * (j[1][0] * j[2][2] - j[1][2] * j[2][0])
        + j[0][2] * (j[1][0] * j[2][1] - j[1][1] * j[2][0]);
    CharPoly::new(a1, a2, -det)
}

/// Roots of the monic cubic, closed form (trigonometric for three real
/// roots, Cardano otherwise) followed by one round of Newton polish.
pub fn cubic_roots(cp: &CharPoly) -> [Complex64; 3] {
    let (a1, a2, a3) = (cp.a1, cp.a2, cp.a3);
    // depressed form t^3 + p t + q, xi = t - a1/3
    let p = a2 - a1 * a1 / 3.0;
    let q = 2.0 * a1 * a1 * a1 / 27.0 - a1 * a2 / 3.0 + a3;
    let shift = -a1 / 3.0;
    let delta = -4.0 * p * p * p - 27.0 * q * q;

    let mut roots = if delta >= 0.0 && p < 0.0 {
        // three real roots
        let rho = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (2.0 * p) * (-3.0 / p).sqrt()).clamp(-1.0, 1.0);
        let theta = arg.acos();
        [0usize, 1, 2].map(|k| {
            let t = rho * ((theta - 2.0 * PI * k as f64) / 3.0).cos();
            Complex64::new(t + shift, 0.0)
        })
    } else if p == 0.0 && q == 0.0 {
        [Complex64::new(shift, 0.0); 3]
    } else {
        // one real root via Cardano, then the conjugate pair by deflation
        let half_q = q / 2.0;
        let disc = half_q * half_q + p * p * p / 27.0;
        let t0 = if disc >= 0.0 {
            let s = disc.sqrt();
            let u = cbrt(-half_q + s);
            let v = cbrt(-half_q - s);
            u + v
        } else {
            // delta > 0 with p < 0 handled above; fall back to trig
            let rho = 2.0 * (-p / 3.0).sqrt();
            let arg = (3.0 * q / (2.0 * p) * (-3.0 / p).sqrt()).clamp(-1.0, 1.0);
            rho * (arg.acos() / 3.0).cos()
        };
        // deflate: t^3 + p t + q = (t - t0)(t^2 + t0 t + (p + t0^2))
        let b = t0;
        let c = p + t0 * t0;
        let quad_disc = b * b - 4.0 * c;
        let (r1, r2) = if quad_disc >= 0.0 {
            let s = quad_disc.sqrt();
            (
                Complex64::new((-b + s) / 2.0, 0.0),
                Complex64::new((-b - s) / 2.0, 0.0),
            )
        } else {
            let s = (-quad_disc).sqrt() / 2.0;
            (Complex64::new(-b / 2.0, s), Complex64::new(-b / 2.0, -s))
        };
        [
            Complex64::new(t0 + shift, 0.0),
            r1 + shift,
            r2 + shift,
        ]
    };

    for r in roots.iter_mut() {
        for _ in 0..3 {
            let f = cp.eval(*r);
            let df = cp.eval_deriv(*r);
            if df.norm() > 1e-300 {
                let step = f / df;
                if step.norm() < 1e-3 * (1.0 + r.norm()) {
                    *r -= step;
                }
            }
        }
        if r.im.abs() < 1e-12 * (1.0 + r.re.abs()) {
            // keep real roots exactly real so arg() is 0 or pi
            *r = Complex64::new(r.re, 0.0);
        }
    }
    roots
}

fn cbrt(x: f64) -> f64 {
    x.signum() * x.abs().cbrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Clause {
    I,
    II,
    III,
    IV,
    Indeterminate,
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Clause::I => "I",
            Clause::II => "II",
            Clause::III => "III",
            Clause::IV => "IV",
            Clause::Indeterminate => "indeterminate",
        };
        f.write_str(s)
    }
}

/// Coefficient-based classification. `stable` is `None` when the
/// applicable clause says nothing at this order; the eigenvalue
/// argument test is then authoritative.
#[derive(Debug, Clone, Copy)]
pub struct LocalClassification {
    pub clause: Clause,
    pub stable: Option<bool>,
}

const CLAUSE_IV_TOL: f64 = 1e-9;
const TWO_THIRDS: f64 = 2.0 / 3.0;

pub fn classify_local(cp: &CharPoly, m: f64) -> LocalClassification {
    let d = cp.discriminant;
    let (a1, a2, a3) = (cp.a1, cp.a2, cp.a3);
    if d > 0.0 && a1 > 0.0 && a3 > 0.0 && a1 * a2 - a3 > 0.0 {
        return LocalClassification { clause: Clause::I, stable: Some(true) };
    }
    if d < 0.0 && a1 > 0.0 && a2 > 0.0 && (a1 * a2 - a3).abs() <= CLAUSE_IV_TOL {
        let stable = if m < 1.0 { Some(true) } else { None };
        return LocalClassification { clause: Clause::IV, stable };
    }
    if d < 0.0 && a1 >= 0.0 && a2 >= 0.0 && a3 > 0.0 {
        let stable = if m < TWO_THIRDS { Some(true) } else { None };
        return LocalClassification { clause: Clause::II, stable };
    }
    if d < 0.0 && a1 < 0.0 && a2 < 0.0 {
        let stable = if m > TWO_THIRDS { Some(false) } else { None };
        return LocalClassification { clause: Clause::III, stable };
    }
    LocalClassification { clause: Clause::Indeterminate, stable: None }
}

/// Full stability report for one Jacobian at one order.
#[derive(Debug, Clone)]
pub struct StabilityReport {
    pub charpoly: CharPoly,
    pub eigenvalues: [Complex64; 3],
    pub clause: Clause,
    /// verdict of the argument test m·π/2 < min|arg ξ|
    pub stable_for_m: bool,
    /// some eigenvalue is (numerically) zero
    pub marginal: bool,
    pub min_arg: f64,
    /// (2/π)·min|arg ξ| clamped to [0, 1]
    pub critical_order: f64,
}

const ZERO_EIG_TOL: f64 = 1e-10;

/// Direct eigenvalue-argument test: stable at order m iff every
/// eigenvalue ξ satisfies |arg ξ| > mπ/2.
pub fn eigen_arg_check(j: &Matrix3, m: f64) -> StabilityReport {
    let cp = charpoly_coeffs(j);
    let eigenvalues = cubic_roots(&cp);
    let scale = eigenvalues.iter().map(|e| e.norm()).fold(1.0_f64, f64::max);
    let marginal = eigenvalues.iter().any(|e| e.norm() < ZERO_EIG_TOL * scale);
    let min_arg = eigenvalues
        .iter()
        .map(|e| e.arg().abs())
        .fold(f64::INFINITY, f64::min);
    let critical_order = (2.0 / PI * min_arg).clamp(0.0, 1.0);
    let stable_for_m = !marginal && m * PI / 2.0 < min_arg;
    let clause = classify_local(&cp, m).clause;
    StabilityReport {
        charpoly: cp,
        eigenvalues,
        clause,
        stable_for_m,
        marginal,
        min_arg,
        critical_order,
    }
}

impl StabilityReport {
    /// key=value serialization, one pair per line.
    pub fn to_key_values(&self) -> String {
        let mut out = String::new();
        let cp = &self.charpoly;
        out.push_str(&format!("A1={:.9}\n", cp.a1));
        out.push_str(&format!("A2={:.9}\n", cp.a2));
        out.push_str(&format!("A3={:.9}\n", cp.a3));
        out.push_str(&format!("D={:.9e}\n", cp.discriminant));
        for (i, e) in self.eigenvalues.iter().enumerate() {
            out.push_str(&format!("eig{}_re={:.9}\n", i + 1, e.re));
            out.push_str(&format!("eig{}_im={:.9}\n", i + 1, e.im));
        }
        out.push_str(&format!("clause={}\n", self.clause));
        out.push_str(&format!("m_star={:.9}\n", self.critical_order));
        let verdict = if self.marginal {
            "marginal"
        } else if self.stable_for_m {
            "stable"
        } else {
            "unstable"
        };
        out.push_str(&format!("verdict={}\n", verdict));
        out
    }
}

/// Which expression supplies the constant α in the second and third
/// global-stability inequalities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlphaVariant {
    /// 1/(b²(c + c/4b + r)) — the invariant-region constant
    TheoremR,
    /// 1/(b²(c + c/4b + d)) — reproduces the worked numeric α
    ExampleD,
    /// 1/(x*·y*) — the value that reproduces the worked c2/c3 numbers
    InteriorProduct,
}

impl fmt::Display for AlphaVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            AlphaVariant::TheoremR => "alpha-r",
            AlphaVariant::ExampleD => "alpha-d",
            AlphaVariant::InteriorProduct => "alpha-interior",
        };
        f.write_str(s)
    }
}

/// Left-hand sides of the three global-stability inequalities under
/// one α reading; the verdict requires all three strictly negative.
#[derive(Debug, Clone, Copy)]
pub struct GlobalConditions {
    pub variant: AlphaVariant,
    pub alpha: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub verdict: bool,
}

#[derive(Debug, Clone)]
pub struct GlobalReport {
    pub variants: [GlobalConditions; 3],
}

impl GlobalReport {
    pub fn get(&self, v: AlphaVariant) -> &GlobalConditions {
        self.variants.iter().find(|g| g.variant == v).unwrap()
    }
}

fn conditions_for(rp: &RescaledParams, e: &StateVector, variant: AlphaVariant) -> GlobalConditions {
    let (xs, ys, zs) = (e.x, e.y, e.z);
    let kb = rp.c + rp.c / (4.0 * rp.b);
    let alpha = match variant {
        AlphaVariant::TheoremR => 1.0 / (rp.b * rp.b * (kb + rp.r)),
        AlphaVariant::ExampleD => 1.0 / (rp.b * rp.b * (kb + rp.d)),
        AlphaVariant::InteriorProduct => 1.0 / (xs * ys),
    };
    let c1 = ys / (rp.a * (rp.a + xs)) - 1.0;
    let c2 = (rp.a + xs) / (rp.a * rp.c)
        * (zs / (rp.d * (rp.d + ys)) - 1.0 / (2.0 * (kb + rp.d)))
        + rp.q / (2.0 * rp.b * rp.r * alpha);
    let c3 = rp.q / (rp.b * rp.r * alpha) - (rp.a + xs) / (rp.a * rp.c * (kb + rp.d));
    GlobalConditions {
        variant,
        alpha,
        c1,
        c2,
        c3,
        verdict: c1 < 0.0 && c2 < 0.0 && c3 < 0.0,
    }
}

/// Evaluate the three global-stability inequalities at the interior
/// equilibrium `e` under all α readings.
pub fn global_stability_check(rp: &RescaledParams, e: &StateVector) -> GlobalReport {
    GlobalReport {
        variants: [
            conditions_for(rp, e, AlphaVariant::TheoremR),
            conditions_for(rp, e, AlphaVariant::ExampleD),
            conditions_for(rp, e, AlphaVariant::InteriorProduct),
        ],
    }
}

/// V(s) = Σ wᵢ (sᵢ − eᵢ − eᵢ ln(sᵢ/eᵢ)) with the weights from the
/// global-stability proof; zero exactly at the equilibrium.
pub fn lyapunov_value(rp: &RescaledParams, e: &StateVector, s: &StateVector) -> Result<f64> {
    if s.x <= 0.0 || s.y <= 0.0 || s.z <= 0.0 {
        return Err(Error::Domain(format!(
            "Lyapunov value requires a strictly positive state, got ({}, {}, {})",
            s.x, s.y, s.z
        )));
    }
    let term = |u: f64, us: f64| u - us - us * (u / us).ln();
    let wy = (rp.a + e.x) / (rp.a * rp.c);
    let wz = e.y + rp.r;
    Ok(term(s.x, e.x) + wy * term(s.y, e.y) + wz * term(s.z, e.z))
}
