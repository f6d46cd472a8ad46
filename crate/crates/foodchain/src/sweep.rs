//! One-parameter sweeps of the model with attractor-extrema extraction
//! and first period-doubling detection.

use crate::error::{Error, Result};
use crate::model::{self, OriginalParams, StateVector};
use crate::solver::{solve_caputo_pece, FractionalOrder, SolverOptions};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Sweep configuration: which original parameter to vary, over what
/// grid, and how each point is simulated.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub parameter_name: String,
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
    pub order: FractionalOrder,
    pub sim: SolverOptions,
    /// time units discarded before extrema are collected
    pub transient: f64,
    pub initial: StateVector,
}

impl SweepSpec {
    pub fn validate(&self, base: &OriginalParams) -> Result<()> {
        if base.with_value(&self.parameter_name, self.lo).is_none() {
            return Err(Error::InvalidOptions(format!(
                "unknown parameter name '{}'",
                self.parameter_name
            )));
        }
        if !(self.lo < self.hi) {
            return Err(Error::InvalidOptions(format!(
                "sweep range [{}, {}] must be increasing",
                self.lo, self.hi
            )));
        }
        if self.count < 2 {
            return Err(Error::InvalidOptions("sweep needs at least 2 grid points".into()));
        }
        if !(self.transient < self.sim.t_end) {
            return Err(Error::InvalidOptions(format!(
                "transient {} must be below t_end {}",
                self.transient, self.sim.t_end
            )));
        }
        self.sim.validate()?;
        Ok(())
    }

    pub fn grid(&self) -> Vec<f64> {
        let n = self.count;
        (0..n)
            .map(|i| self.lo + (self.hi - self.lo) * i as f64 / (n - 1) as f64)
            .collect()
    }
}

/// Post-transient statistics of one simulated grid point.
#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub value: f64,
    /// sorted local maxima of X(t) after the transient
    pub maxima: Vec<f64>,
    /// number of distinct maxima after tolerance clustering;
    /// 0 flags monotone convergence (no interior maximum)
    pub cluster_count: usize,
    /// simulation aborted (blow-up / invalid parameters)
    pub failed: bool,
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub parameter_name: String,
    pub points: Vec<SweepPoint>,
}

fn simulate_point(spec: &SweepSpec, base: &OriginalParams, value: f64) -> SweepPoint {
    let failed = SweepPoint { value, maxima: Vec::new(), cluster_count: 0, failed: true };
    let Some(op) = base.with_value(&spec.parameter_name, value) else {
        return failed;
    };
    if op.validate().is_err() {
        return failed;
    }
    let f = |s: &[f64; 3]| model::rhs_original(&op, &StateVector::original(s[0], s[1], s[2]));
    let s0 = &spec.initial;
    let traj = match solve_caputo_pece(&f, spec.order, [s0.x, s0.y, s0.z], &spec.sim) {
        Ok(t) => t,
        Err(_) => return failed,
    };
    let xs: Vec<f64> = traj
        .times
        .iter()
        .zip(traj.states.iter())
        .filter(|(t, _)| **t >= spec.transient)
        .map(|(_, s)| s[0])
        .collect();
    let maxima = local_maxima(&xs);
    let amplitude = match (
        xs.iter().cloned().reduce(f64::min),
        xs.iter().cloned().reduce(f64::max),
    ) {
        (Some(lo), Some(hi)) => hi - lo,
        _ => 0.0,
    };
    let cluster_count = cluster_count(&maxima, amplitude);
    SweepPoint { value, maxima, cluster_count, failed: false }
}

fn local_maxima(xs: &[f64]) -> Vec<f64> {
    let mut out = Vec::new();
    for w in xs.windows(3) {
        if w[1] > w[0] && w[1] > w[2] {
            out.push(w[1]);
        }
    }
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out
}

/// Distinct maxima after clustering with tolerance 1e-2 of the
/// attractor amplitude (a flat trajectory keeps its maxima in one
/// cluster regardless of scale).
fn cluster_count(sorted_maxima: &[f64], amplitude: f64) -> usize {
    if sorted_maxima.is_empty() {
        return 0;
    }
    let tol = (1e-2 * amplitude).max(1e-8);
    let mut clusters = 1;
    let mut anchor = sorted_maxima[0];
    for &m in &sorted_maxima[1..] {
        if m - anchor > tol {
            clusters += 1;
            anchor = m;
        }
    }
    clusters
}

/// Simulate every grid point. With the `parallel` feature grid points
/// run on the rayon thread pool; otherwise sequentially.
pub fn run_sweep(spec: &SweepSpec, base: &OriginalParams) -> Result<SweepResult> {
    spec.validate(base)?;
    #[cfg(feature = "parallel")]
    let points = spec
        .grid()
        .into_par_iter()
        .map(|v| simulate_point(spec, base, v))
        .collect();
    #[cfg(not(feature = "parallel"))]
    let points = spec
        .grid()
        .into_iter()
        .map(|v| simulate_point(spec, base, v))
        .collect();
    Ok(SweepResult { parameter_name: spec.parameter_name.clone(), points })
}

/// Always-sequential variant (used by the benchmarks for comparison).
pub fn run_sweep_seq(spec: &SweepSpec, base: &OriginalParams) -> Result<SweepResult> {
    spec.validate(base)?;
    let points = spec
        .grid()
        .into_iter()
        .map(|v| simulate_point(spec, base, v))
        .collect();
    Ok(SweepResult { parameter_name: spec.parameter_name.clone(), points })
}

impl SweepResult {
    /// First parameter value where the attractor splits: midpoint of
    /// the first consecutive pair going from one cluster to two or
    /// more. Failed grid points are skipped.
    pub fn detect_first_doubling(&self) -> Option<f64> {
        let ok: Vec<&SweepPoint> = self.points.iter().filter(|p| !p.failed).collect();
        for w in ok.windows(2) {
            if w[0].cluster_count <= 1 && w[1].cluster_count >= 2 {
                return Some((w[0].value + w[1].value) / 2.0);
            }
        }
        None
    }

    /// CSV rows, one per (grid point, maximum); points with no maxima
    /// emit an empty third field, failed points say so.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("param,value,x_max\n");
        for p in &self.points {
            if p.failed {
                out.push_str(&format!("{},{:.9},failed\n", self.parameter_name, p.value));
            } else if p.maxima.is_empty() {
                out.push_str(&format!("{},{:.9},\n", self.parameter_name, p.value));
            } else {
                for m in &p.maxima {
                    out.push_str(&format!("{},{:.9},{:.9}\n", self.parameter_name, p.value, m));
                }
            }
        }
        out
    }
}

/// Sweep defaults used by the CLI and the acceptance runs: horizon 500
/// time units, transient 300, step 0.05, initial populations
/// (1.2, 1.2, 1.2) in original units.
pub fn default_spec(parameter_name: &str, lo: f64, hi: f64, count: usize, order: FractionalOrder) -> SweepSpec {
    SweepSpec {
        parameter_name: parameter_name.to_string(),
        lo,
        hi,
        count,
        order,
        sim: SolverOptions {
            step: 0.05,
            t_end: 500.0,
            memory_truncation: None,
            corrector_iterations: 1,
        },
        transient: 300.0,
        initial: StateVector::original(1.2, 1.2, 1.2),
    }
}
