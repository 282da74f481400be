//! Simulation and analysis of finite-armed structured bandits.
//!
//! A structured bandit has arm means `mu_k(theta)` that are known functions
//! of one unknown parameter. This crate provides problem definitions and a
//! builtin catalog, the UCB family of policies including the structured
//! variants, regret bound calculators, and a deterministic Monte-Carlo
//! harness that writes plot-ready tables.

pub mod cli;
pub mod env;
pub mod error;
pub mod harness;
pub mod policies;
pub mod problem;
pub mod rng;
pub mod stats;
pub mod theory;

pub use env::Environment;
pub use error::{Error, Result};
pub use policies::{Policy, PolicyKind, PolicySpec, SetMode};
pub use problem::{GapProfile, MeanFunction, ParameterSpace, StructuredBandit, Theta};
pub use stats::ArmStatistics;
