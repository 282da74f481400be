//! Classic UCB and its structured counterpart.

use super::confidence::{confidence_radius, plausible_parameters, SetMode};
use crate::problem::{argmax, StructuredBandit};
use crate::stats::ArmStatistics;

/// Forces every arm once, then maximizes `mean + radius`.
pub fn ucb_select(stats: &ArmStatistics, t: u64, alpha: f64, sigma2: f64) -> usize {
    if let Some(arm) = stats.all_pulls().iter().position(|&n| n == 0) {
        return arm;
    }
    let index: Vec<f64> = (0..stats.arms())
        .map(|i| stats.mean(i) + confidence_radius(t, stats.pulls(i), alpha, sigma2))
        .collect();
    argmax(&index)
}

/// Optimistic arm over the plausible set; least-pulled arm when the set is
/// empty.
pub fn ucbs_select(bandit: &StructuredBandit, stats: &ArmStatistics, t: u64, alpha: f64, mode: SetMode) -> usize {
    let set = plausible_parameters(bandit, stats, t, alpha, mode);
    if set.is_empty() {
        return stats.least_pulled();
    }
    argmax(&set.sup_means(bandit))
}
