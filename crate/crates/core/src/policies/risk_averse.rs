//! Risk-averse UCB-S: commits to the arm that is optimal for some
//! ambiguous plausible parameter and boosts it until it is not followed.

use super::confidence::{plausible_parameters, SetMode};
use crate::error::{Error, Result};
use crate::problem::{argmax, StructuredBandit};
use crate::stats::ArmStatistics;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RiskAverseState {
    /// Committed arm, if any.
    pub committed: Option<usize>,
}

/// `ln ln max(t, 3)`, never negative.
pub fn beta(t: u64) -> f64 {
    (t.max(3) as f64).ln().ln().max(0.0)
}

pub fn commitment_bonus(t: u64, pulls: u64) -> f64 {
    if pulls == 0 {
        return f64::INFINITY;
    }
    (beta(t) * (t as f64).ln() / pulls as f64).sqrt()
}

pub fn ucbs_ra_select(
    bandit: &StructuredBandit,
    stats: &ArmStatistics,
    state: RiskAverseState,
    t: u64,
    alpha: f64,
    mode: SetMode,
) -> Result<(usize, RiskAverseState)> {
    if !bandit.space().has_ambiguous_marks() {
        return Err(Error::MissingAmbiguousRegion);
    }
    let set = plausible_parameters(bandit, stats, t, alpha, mode);
    let mut kappa = state.committed;
    if kappa.is_none() {
        if let Some(theta) = set.first_ambiguous(bandit) {
            kappa = Some(bandit.optimal_arm(&theta)?);
        }
    }
    let arm = if set.is_empty() {
        stats.least_pulled()
    } else {
        let mut index = set.sup_means(bandit);
        if let Some(k) = kappa {
            index[k] += commitment_bonus(t, stats.pulls(k));
        }
        argmax(&index)
    };
    let next = RiskAverseState { committed: kappa.filter(|&k| k == arm) };
    Ok((arm, next))
}
