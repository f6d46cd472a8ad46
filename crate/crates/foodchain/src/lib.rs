//! Simulation and stability analysis of a three-species food chain
//! with Caputo fractional-order dynamics.
//!
//! The crate provides:
//! - the model vector field in original and nondimensional coordinates
//!   ([`model`]),
//! - an Adams–Bashforth–Moulton predictor–corrector solver for Caputo
//!   systems of order m ∈ (0, 1] ([`solver`]),
//! - closed-form equilibria and their existence conditions
//!   ([`equilibria`]),
//! - local classification via the fractional Routh–Hurwitz conditions
//!   and the eigenvalue-argument test, plus the global Lyapunov-based
//!   check ([`stability`]),
//! - one-parameter sweeps with period-doubling detection ([`sweep`]),
//! - parameter-file and CSV I/O ([`io`]).

pub mod cli;
pub mod equilibria;
pub mod error;
pub mod gamma;
pub mod io;
pub mod model;
pub mod solver;
pub mod stability;
pub mod sweep;

pub use error::{Error, Result};
