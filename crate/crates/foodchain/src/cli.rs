//! Command-line front end: parse a parameter file, run one command,
//! write its report or CSV.

use crate::equilibria::{self, interior_existence_thresholds};
use crate::error::{Error, Result};
use crate::io::{self, fmt_sig9, Params};
use crate::model::{
    invariance_check, rescale_params, unscale_state, OriginalParams,
    RescaledParams, StateVector,
};
use crate::solver::{solve_caputo_pece, FractionalOrder, SolverOptions};
use crate::stability::{classify_local, eigen_arg_check, global_stability_check, jacobian_at, lyapunov_value};
use crate::sweep;
use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(
    name = "foodchain",
    about = "Fractional-order tritrophic food-chain model: simulation, equilibria, stability, bifurcation sweeps",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct ParamsArg {
    /// Parameter file (key=value lines; original or nondimensional keys)
    #[arg(long)]
    pub params: PathBuf,
}

#[derive(Args, Debug, Clone)]
pub struct SimArgs {
    /// Fractional order of the Caputo derivative, in (0, 1]
    #[arg(long, default_value_t = 1.0)]
    pub m: f64,
    /// Step size
    #[arg(long, default_value_t = 0.05)]
    pub h: f64,
    /// Integration horizon
    #[arg(long = "t-end", default_value_t = 500.0)]
    pub t_end: f64,
    /// Keep only this many most recent history terms (default: full memory)
    #[arg(long)]
    pub truncate: Option<usize>,
    #[arg(long, default_value_t = 1.2)]
    pub x0: f64,
    #[arg(long, default_value_t = 1.2)]
    pub y0: f64,
    #[arg(long, default_value_t = 1.2)]
    pub z0: f64,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArg {
    /// Output file (default: stdout)
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Integrate the model and write a trajectory CSV (t,x,y,z)
    Simulate {
        #[command(flatten)]
        params: ParamsArg,
        #[command(flatten)]
        sim: SimArgs,
        #[command(flatten)]
        out: OutputArg,
    },
    /// Report all equilibria, existence thresholds and residuals
    Equilibria {
        #[command(flatten)]
        params: ParamsArg,
        #[command(flatten)]
        out: OutputArg,
    },
    /// Local stability of the interior equilibrium at order m
    Stability {
        #[command(flatten)]
        params: ParamsArg,
        /// Fractional order to test
        #[arg(long, default_value_t = 1.0)]
        m: f64,
        #[command(flatten)]
        out: OutputArg,
    },
    /// Global-stability conditions at the interior equilibrium
    Global {
        #[command(flatten)]
        params: ParamsArg,
        #[command(flatten)]
        out: OutputArg,
    },
    /// Sweep one original parameter and report attractor maxima
    Sweep {
        #[command(flatten)]
        params: ParamsArg,
        /// Name of the swept parameter (one of the original twelve)
        #[arg(long)]
        param: String,
        #[arg(long)]
        lo: f64,
        #[arg(long)]
        hi: f64,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[command(flatten)]
        sim: SimArgs,
        /// Time discarded before maxima are collected
        #[arg(long, default_value_t = 300.0)]
        transient: f64,
        #[command(flatten)]
        out: OutputArg,
    },
    /// Check the boundedness condition and trapping-set constants
    CheckInvariance {
        #[command(flatten)]
        params: ParamsArg,
        #[command(flatten)]
        out: OutputArg,
    },
}

fn write_out(out: &OutputArg, text: &str) -> Result<()> {
    match &out.output {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

/// Both parameter frames, with the original one kept when the file
/// provided it (reports then show both coordinate systems).
struct Frames {
    original: Option<OriginalParams>,
    rescaled: RescaledParams,
}

fn load(params: &ParamsArg) -> Result<Frames> {
    Ok(match io::read_params(&params.params)? {
        Params::Original(op) => Frames {
            rescaled: rescale_params(&op),
            original: Some(op),
        },
        Params::Rescaled(rp) => Frames { original: None, rescaled: rp },
    })
}

fn order(m: f64) -> Result<FractionalOrder> {
    FractionalOrder::new(m)
}

fn sim_options(sim: &SimArgs) -> SolverOptions {
    SolverOptions {
        step: sim.h,
        t_end: sim.t_end,
        memory_truncation: sim.truncate,
        corrector_iterations: 1,
    }
}

fn fmt_state(label: &str, s: &StateVector) -> String {
    format!(
        "{label}={},{},{}\n",
        fmt_sig9(s.x),
        fmt_sig9(s.y),
        fmt_sig9(s.z)
    )
}

fn run_simulate(params: &ParamsArg, sim: &SimArgs, out: &OutputArg) -> Result<()> {
    let frames = load(params)?;
    let m = order(sim.m)?;
    let opts = sim_options(sim);
    let init = [sim.x0, sim.y0, sim.z0];
    let traj = match &frames.original {
        Some(op) => {
            let f = |s: &[f64; 3]| {
                crate::model::rhs_original(op, &StateVector::original(s[0], s[1], s[2]))
            };
            solve_caputo_pece(&f, m, init, &opts)?
        }
        None => {
            let rp = &frames.rescaled;
            let f = |s: &[f64; 3]| {
                crate::model::rhs_rescaled(rp, &StateVector::rescaled(s[0], s[1], s[2]))
            };
            solve_caputo_pece(&f, m, init, &opts)?
        }
    };
    write_out(out, &io::trajectory_to_csv(&traj))
}

fn run_equilibria(params: &ParamsArg, out: &OutputArg) -> Result<()> {
    let frames = load(params)?;
    let rp = &frames.rescaled;
    let set = equilibria::boundary_equilibria(rp);
    let mut text = String::new();
    text.push_str(&fmt_state("E0", &set.e0));
    text.push_str(&fmt_state("E1", &set.e1));
    match &set.e2 {
        Some((e2, theta)) => {
            text.push_str(&fmt_state("E2", e2));
            text.push_str(&format!("theta={}\n", fmt_sig9(*theta)));
            text.push_str(&format!("E2_residual={:.3e}\n", equilibria::residual(rp, e2)));
        }
        None => text.push_str("E2=absent\n"),
    }
    match &set.e_star {
        Some(e) => {
            text.push_str(&fmt_state("E_star", e));
            if let Some(op) = &frames.original {
                text.push_str(&fmt_state("E_star_original", &unscale_state(op, e)));
            }
            text.push_str(&format!("E_star_residual={:.3e}\n", equilibria::residual(rp, e)));
            if set.minus_branch_positive {
                text.push_str("warning=minus square-root branch is also positive\n");
            }
        }
        None => text.push_str("E_star=absent\n"),
    }
    if let Some(op) = &frames.original {
        let t = interior_existence_thresholds(op);
        text.push_str(&format!(
            "thresholds={},{},{}\n",
            fmt_sig9(t.t1),
            fmt_sig9(t.t2),
            fmt_sig9(t.t3)
        ));
        text.push_str(&format!("premise_growth={}\n", t.premise_growth));
        text.push_str(&format!("premise_conversion={}\n", t.premise_conversion));
        text.push_str(&format!("existence_verdict={}\n", t.verdict));
    }
    write_out(out, &text)
}

fn run_stability(params: &ParamsArg, m: f64, out: &OutputArg) -> Result<()> {
    let frames = load(params)?;
    let m = order(m)?;
    let rp = &frames.rescaled;
    let Some(e) = equilibria::interior_equilibrium(rp) else {
        return write_out(out, "E_star=absent\n");
    };
    let j = jacobian_at(rp, &e);
    let rep = eigen_arg_check(&j, m.value());
    let cls = classify_local(&rep.charpoly, m.value());
    let mut text = rep.to_key_values();
    text.push_str(&format!(
        "clause_verdict={}\n",
        match cls.stable {
            Some(true) => "stable",
            Some(false) => "unstable",
            None => "deferred",
        }
    ));
    write_out(out, &text)
}

fn run_global(params: &ParamsArg, out: &OutputArg) -> Result<()> {
    let frames = load(params)?;
    let rp = &frames.rescaled;
    let Some(e) = equilibria::interior_equilibrium(rp) else {
        return write_out(out, "E_star=absent\n");
    };
    let rep = global_stability_check(rp, &e);
    let mut text = String::new();
    for g in &rep.variants {
        let v = g.variant;
        text.push_str(&format!("{v}.alpha={}\n", fmt_sig9(g.alpha)));
        text.push_str(&format!("{v}.c1={}\n", fmt_sig9(g.c1)));
        text.push_str(&format!("{v}.c2={}\n", fmt_sig9(g.c2)));
        text.push_str(&format!("{v}.c3={}\n", fmt_sig9(g.c3)));
        text.push_str(&format!("{v}.verdict={}\n", g.verdict));
    }
    // Lyapunov weights reference point for downstream checks
    let v_at_e = lyapunov_value(rp, &e, &e)?;
    text.push_str(&format!("lyapunov_at_equilibrium={}\n", fmt_sig9(v_at_e)));
    write_out(out, &text)
}

#[allow(clippy::too_many_arguments)]
fn run_sweep_cmd(
    params: &ParamsArg,
    param: &str,
    lo: f64,
    hi: f64,
    count: usize,
    sim: &SimArgs,
    transient: f64,
    out: &OutputArg,
) -> Result<()> {
    let frames = load(params)?;
    let Some(op) = frames.original else {
        return Err(Error::InvalidOptions(
            "sweep requires an original-frame parameter file".into(),
        ));
    };
    let spec = sweep::SweepSpec {
        parameter_name: param.to_string(),
        lo,
        hi,
        count,
        order: order(sim.m)?,
        sim: sim_options(sim),
        transient,
        initial: StateVector::original(sim.x0, sim.y0, sim.z0),
    };
    let result = sweep::run_sweep(&spec, &op)?;
    let mut text = result.to_csv();
    match result.detect_first_doubling() {
        Some(v) => text.push_str(&format!("# first_doubling={}\n", fmt_sig9(v))),
        None => text.push_str("# first_doubling=none\n"),
    }
    write_out(out, &text)
}

fn run_check_invariance(params: &ParamsArg, out: &OutputArg) -> Result<()> {
    let frames = load(params)?;
    let rep = invariance_check(&frames.rescaled);
    let mut text = String::new();
    text.push_str(&format!("condition_holds={}\n", rep.condition_holds));
    text.push_str(&format!("alpha={}\n", fmt_sig9(rep.alpha)));
    match rep.m_bound {
        Some(mb) => text.push_str(&format!("m_bound={}\n", fmt_sig9(mb))),
        None => text.push_str("m_bound=undefined\n"),
    }
    text.push_str(&format!(
        "bounds={},{},{}\n",
        fmt_sig9(rep.bounds[0]),
        fmt_sig9(rep.bounds[1]),
        if rep.bounds[2].is_nan() { "undefined".to_string() } else { fmt_sig9(rep.bounds[2]) }
    ));
    write_out(out, &text)
}

/// Run one parsed command. Errors map to exit code 1 (numerical or
/// I/O failure) in `main`; argument errors exit 2 via clap.
pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Simulate { params, sim, out } => run_simulate(params, sim, out),
        Command::Equilibria { params, out } => run_equilibria(params, out),
        Command::Stability { params, m, out } => run_stability(params, *m, out),
        Command::Global { params, out } => run_global(params, out),
        Command::Sweep { params, param, lo, hi, count, sim, transient, out } => {
            run_sweep_cmd(params, param, *lo, *hi, *count, sim, *transient, out)
        }
        Command::CheckInvariance { params, out } => run_check_invariance(params, out),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn parses_simulate_invocation() {
        let cli = Cli::parse_from([
            "foodchain", "simulate", "--params", "ex1.txt", "--m", "0.9", "--h", "0.05",
            "--t-end", "500", "--x0", "1.2", "--y0", "1.2", "--z0", "1.2",
        ]);
        let Command::Simulate { sim, .. } = cli.command else {
            panic!("expected simulate");
        };
        assert_eq!(sim.m, 0.9);
        assert_eq!(sim.t_end, 500.0);
    }

    #[test]
    fn parses_sweep_invocation() {
        let cli = Cli::parse_from([
            "foodchain", "sweep", "--params", "ex2.txt", "--param", "a0", "--lo", "1.6",
            "--hi", "2.1", "--count", "100", "--m", "0.97",
        ]);
        let Command::Sweep { param, lo, hi, count, .. } = cli.command else {
            panic!("expected sweep");
        };
        assert_eq!(param, "a0");
        assert_eq!((lo, hi, count), (1.6, 2.1, 100));
    }

    #[test]
    fn order_out_of_range_is_rejected_at_run_time() {
        assert!(order(1.5).is_err());
        assert!(order(0.0).is_err());
        assert!(order(0.9).is_ok());
    }
}
