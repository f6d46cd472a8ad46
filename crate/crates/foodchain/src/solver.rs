//! Time integrators: the Adams–Bashforth–Moulton PECE scheme for Caputo
//! fractional systems and a classical RK4 reference.

use crate::error::{Error, Result};
use crate::gamma::gamma;

/// Order of the Caputo derivative, restricted to (0, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FractionalOrder(f64);

impl FractionalOrder {
    pub fn new(m: f64) -> Result<Self> {
        if m.is_finite() && m > 0.0 && m <= 1.0 {
            Ok(Self(m))
        } else {
            Err(Error::InvalidOptions(format!(
                "fractional order must lie in (0, 1], got {m}"
            )))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Fixed-step integration options.
#[derive(Debug, Clone)]
pub struct SolverOptions {
    pub step: f64,
    pub t_end: f64,
    /// Number of most recent history terms kept in the memory sums.
    /// `None` keeps the full history.
    pub memory_truncation: Option<usize>,
    pub corrector_iterations: usize,
}

impl SolverOptions {
    pub fn new(step: f64, t_end: f64) -> Self {
        Self {
            step,
            t_end,
            memory_truncation: None,
            corrector_iterations: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(Error::InvalidOptions(format!(
                "step must be positive, got {}",
                self.step
            )));
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return Err(Error::InvalidOptions(format!(
                "t_end must be positive, got {}",
                self.t_end
            )));
        }
        if self.step > self.t_end || self.n_steps() < 1 {
            return Err(Error::InvalidOptions(
                "t_end / step must give at least 2 grid points".into(),
            ));
        }
        if self.corrector_iterations < 1 {
            return Err(Error::InvalidOptions(
                "corrector_iterations must be at least 1".into(),
            ));
        }
        Ok(())
    }

    pub fn n_steps(&self) -> usize {
        (self.t_end / self.step).round() as usize
    }
}

/// Solution on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<[f64; 3]>,
    pub order: f64,
}

impl Trajectory {
    pub fn terminal(&self) -> [f64; 3] {
        *self.states.last().expect("trajectory is never empty")
    }

    /// States at or after time `t0`.
    pub fn after(&self, t0: f64) -> &[[f64; 3]] {
        let i = self.times.partition_point(|&t| t < t0);
        &self.states[i..]
    }
}

/// Tolerated undershoot below zero before a run is aborted; smaller
/// negatives are clamped to exactly zero.
const NEGATIVE_TOLERANCE: f64 = 1e-9;

fn check_state(s: &mut [f64; 3], time: f64) -> Result<()> {
    for (i, v) in s.iter_mut().enumerate() {
        if !v.is_finite() {
            return Err(Error::NonFiniteState { time });
        }
        if *v < 0.0 {
            if *v < -NEGATIVE_TOLERANCE {
                return Err(Error::NegativeState {
                    time,
                    component: i,
                    value: *v,
                });
            }
            *v = 0.0;
        }
    }
    Ok(())
}

/// Rectangle-rule predictor weights: w[k] = (k+1)^m - k^m, so that
/// b_{j,n+1} = (h^m / m) * w[n - j].
fn predictor_weights(m: f64, n_max: usize) -> Vec<f64> {
    let mut w = Vec::with_capacity(n_max + 1);
    let mut prev = 0.0;
    for k in 1..=n_max + 1 {
        let cur = (k as f64).powf(m);
        w.push(cur - prev);
        prev = cur;
    }
    w
}

/// Trapezoid-rule corrector convolution weights:
/// c[k] = (k+2)^{m+1} + k^{m+1} - 2 (k+1)^{m+1}, so that
/// a_{j,n+1} = c[n - j] for 1 <= j <= n.
fn corrector_weights(m: f64, n_max: usize) -> Vec<f64> {
    let e = m + 1.0;
    let pow = |k: usize| (k as f64).powf(e);
    (0..=n_max).map(|k| pow(k + 2) + pow(k) - 2.0 * pow(k + 1)).collect()
}

/// Caputo fractional Adams–Bashforth–Moulton predictor-corrector.
///
/// One predict-evaluate-correct-evaluate cycle per step; extra corrector
/// sweeps re-evaluate the right-hand side at the current iterate.
pub fn solve_caputo_pece<F>(
    rhs: F,
    m: FractionalOrder,
    initial: [f64; 3],
    opts: &SolverOptions,
) -> Result<Trajectory>
where
    F: Fn(&[f64; 3]) -> [f64; 3],
{
    opts.validate()?;
    let m = m.value();
    let h = opts.step;
    let n_steps = opts.n_steps();
    let hm = h.powf(m);
    let pred_scale = hm / gamma(m + 1.0)?;
    let corr_scale = hm / gamma(m + 2.0)?;

    let bw = predictor_weights(m, n_steps);
    let cw = corrector_weights(m, n_steps);

    let mut states = Vec::with_capacity(n_steps + 1);
    let mut start = initial;
    check_state(&mut start, 0.0)?;
    states.push(start);

    // history of rhs evaluations, one flat array per component
    let mut fx = Vec::with_capacity(n_steps + 1);
    let mut fy = Vec::with_capacity(n_steps + 1);
    let mut fz = Vec::with_capacity(n_steps + 1);
    let f0 = rhs(&start);
    fx.push(f0[0]);
    fy.push(f0[1]);
    fz.push(f0[2]);

    for n in 0..n_steps {
        let t_next = (n + 1) as f64 * h;
        let window_start = match opts.memory_truncation {
            Some(len) => (n + 1).saturating_sub(len),
            None => 0,
        };

        // predictor: sum_j b_{j,n+1} f_j
        let mut pred = [0.0f64; 3];
        for j in window_start..=n {
            let w = bw[n - j];
            pred[0] = w.mul_add(fx[j], pred[0]);
            pred[1] = w.mul_add(fy[j], pred[1]);
            pred[2] = w.mul_add(fz[j], pred[2]);
        }
        let x_pred = [
            start[0] + pred_scale * pred[0],
            start[1] + pred_scale * pred[1],
            start[2] + pred_scale * pred[2],
        ];
        let f_pred = rhs(&x_pred);

        // corrector history: a_{0,n+1} f_0 + sum_{j>=1} a_{j,n+1} f_j
        let nf = n as f64;
        let a0 = nf.powf(m + 1.0) - (nf - m) * (nf + 1.0).powf(m);
        let mut hist = [0.0f64; 3];
        if window_start == 0 {
            hist[0] = a0 * fx[0];
            hist[1] = a0 * fy[0];
            hist[2] = a0 * fz[0];
        }
        for j in window_start.max(1)..=n {
            let w = cw[n - j];
            hist[0] = w.mul_add(fx[j], hist[0]);
            hist[1] = w.mul_add(fy[j], hist[1]);
            hist[2] = w.mul_add(fz[j], hist[2]);
        }

        let correct = |f_new: &[f64; 3]| {
            [
                start[0] + corr_scale * (f_new[0] + hist[0]),
                start[1] + corr_scale * (f_new[1] + hist[1]),
                start[2] + corr_scale * (f_new[2] + hist[2]),
            ]
        };
        let mut x_next = correct(&f_pred);
        for _ in 1..opts.corrector_iterations {
            let f_cur = rhs(&x_next);
            x_next = correct(&f_cur);
        }
        check_state(&mut x_next, t_next)?;

        let f_next = rhs(&x_next);
        fx.push(f_next[0]);
        fy.push(f_next[1]);
        fz.push(f_next[2]);
        states.push(x_next);
    }

    Ok(Trajectory {
        times: (0..=n_steps).map(|n| n as f64 * h).collect(),
        states,
        order: m,
    })
}

/// Classical fourth-order Runge–Kutta on the same uniform grid; oracle
/// for the m = 1 limit of the fractional scheme.
pub fn reference_rk4<F>(rhs: F, initial: [f64; 3], opts: &SolverOptions) -> Result<Trajectory>
where
    F: Fn(&[f64; 3]) -> [f64; 3],
{
    opts.validate()?;
    let h = opts.step;
    let n_steps = opts.n_steps();
    let mut states = Vec::with_capacity(n_steps + 1);
    let mut s = initial;
    check_state(&mut s, 0.0)?;
    states.push(s);
    let add = |a: &[f64; 3], b: &[f64; 3], c: f64| {
        [a[0] + c * b[0], a[1] + c * b[1], a[2] + c * b[2]]
    };
    for n in 0..n_steps {
        let k1 = rhs(&s);
        let k2 = rhs(&add(&s, &k1, h / 2.0));
        let k3 = rhs(&add(&s, &k2, h / 2.0));
        let k4 = rhs(&add(&s, &k3, h));
        for i in 0..3 {
            s[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        let t_next = (n + 1) as f64 * h;
        for v in s.iter() {
            if !v.is_finite() {
                return Err(Error::NonFiniteState { time: t_next });
            }
        }
        states.push(s);
    }
    Ok(Trajectory {
        times: (0..=n_steps).map(|n| n as f64 * h).collect(),
        states,
        order: 1.0,
    })
}
