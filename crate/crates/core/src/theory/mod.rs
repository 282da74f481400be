//! Closed-form bounds, threshold functions and parameter classification.

pub mod bounds;
pub mod classify;
pub mod omega;

pub use bounds::{
    confidence_violation, critical_samples, deviation_bound, gaussian_kl, symmetric_lower_bound, theorem1_bound,
    theorem2_bound, tradeoff_lower_bounds, BoundInputs,
};
pub use classify::{ambiguity_profile, ambiguity_ratio, classify_parameter, finite_regret_epsilon, EpsilonOutcome, ThetaClass};
pub use omega::{omega, omega2, omega_star};
