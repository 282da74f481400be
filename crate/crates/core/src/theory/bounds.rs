//! Regret bounds, lower bounds and concentration quantities.

use crate::error::{Error, Result};
use crate::policies::confidence_radius;
use crate::problem::{GapProfile, StructuredBandit, Theta};
use crate::stats::ArmStatistics;

#[derive(Clone, Debug, PartialEq)]
pub struct BoundInputs {
    pub gaps: GapProfile,
    pub n: u64,
    pub alpha: f64,
    pub sigma2: f64,
    pub arms: usize,
}

impl BoundInputs {
    pub fn new(gaps: GapProfile, n: u64, alpha: f64, sigma2: f64) -> Self {
        let arms = gaps.arms();
        BoundInputs { gaps, n, alpha, sigma2, arms }
    }
}

/// Logarithmic regret bound of UCB-S with `alpha > 2`:
/// `2 dmax K (a-1)/(a-2) + sum_{gap>0} 8 a s2 ln n / gap + sum gap`.
pub fn theorem1_bound(inputs: &BoundInputs) -> Result<f64> {
    let BoundInputs { gaps, n, alpha, sigma2, arms } = inputs;
    if !(*alpha > 2.0) {
        return Err(Error::InvalidArgument(format!("the logarithmic bound needs alpha > 2, got {alpha}")));
    }
    if *n == 0 {
        return Err(Error::InvalidArgument("horizon must be at least 1".into()));
    }
    let head = 2.0 * gaps.delta_max * *arms as f64 * (alpha - 1.0) / (alpha - 2.0);
    let log_n = (*n as f64).ln();
    let per_arm: f64 = gaps.suboptimal.iter().map(|&i| 8.0 * alpha * sigma2 * log_n / gaps.gaps[i]).sum();
    let tail: f64 = gaps.gaps.iter().sum();
    Ok(head + per_arm + tail)
}

/// Horizon-free bound of UCB-S with `alpha = 4`:
/// `sum_{gap>0} (32 s2 ln w / gap + gap) + 3 dmax K + dmax K^3 / w`.
pub fn theorem2_bound(gaps: &GapProfile, omega_star: u64, sigma2: f64, arms: usize) -> f64 {
    let w = omega_star.max(1) as f64;
    let k = arms as f64;
    let per_arm: f64 = gaps.suboptimal.iter().map(|&i| 32.0 * sigma2 * w.ln() / gaps.gaps[i] + gaps.gaps[i]).sum();
    per_arm + 3.0 * gaps.delta_max * k + gaps.delta_max * k.powi(3) / w
}

/// `ceil(8 s2 alpha ln n / gap^2)`.
pub fn critical_samples(n: u64, gap: f64, alpha: f64, sigma2: f64) -> Result<u64> {
    if !(gap > 0.0) {
        return Err(Error::InvalidArgument(format!("gap must be positive, got {gap}")));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("horizon must be at least 1".into()));
    }
    Ok((8.0 * sigma2 * alpha * (n as f64).ln() / (gap * gap)).ceil() as u64)
}

/// Whether some pulled arm's empirical mean is at least one confidence
/// radius away from its true mean at `theta_star`.
pub fn confidence_violation(
    bandit: &StructuredBandit,
    theta_star: &Theta,
    stats: &ArmStatistics,
    t: u64,
    alpha: f64,
) -> Result<bool> {
    let means = bandit.means_at(theta_star)?;
    Ok((0..stats.arms()).any(|i| {
        let pulls = stats.pulls(i);
        pulls >= 1 && (stats.mean(i) - means[i]).abs() >= confidence_radius(t, pulls, alpha, bandit.sigma2())
    }))
}

/// Relative entropy between `N(a, s2)` and `N(b, s2)`.
pub fn gaussian_kl(mean_a: f64, mean_b: f64, sigma2: f64) -> Result<f64> {
    if !(sigma2 > 0.0) {
        return Err(Error::InvalidArgument(format!("sigma2 must be positive, got {sigma2}")));
    }
    let d = mean_a - mean_b;
    Ok(d * d / (2.0 * sigma2))
}

/// Asymptotic floor `1 / (8 theta)` on the worse of the two regrets of the
/// symmetric two-point problem.
pub fn symmetric_lower_bound(theta: f64) -> Result<f64> {
    if !(theta > 0.0) {
        return Err(Error::InvalidArgument(format!("theta must be positive, got {theta}")));
    }
    Ok(1.0 / (8.0 * theta))
}

/// Floors on the two regrets of a pair of parameters whose optimal arms
/// differ by gap `delta`: `((1 + ln(2 n d^2)) / (8 d) - r2 / 2,
/// (n d / 2) exp(-4 r1 d) - r1)`.
pub fn tradeoff_lower_bounds(delta: f64, n: u64, regret_theta1: f64, regret_theta2: f64) -> Result<(f64, f64)> {
    if !(delta > 0.0) {
        return Err(Error::InvalidArgument(format!("delta must be positive, got {delta}")));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("horizon must be at least 1".into()));
    }
    let nf = n as f64;
    let part1 = (1.0 + (2.0 * nf * delta * delta).ln()) / (8.0 * delta) - regret_theta2 / 2.0;
    let part2 = nf * delta / 2.0 * (-4.0 * regret_theta1 * delta).exp() - regret_theta1;
    Ok((part1, part2))
}

/// `2 exp(-eps^2 n / (2 s2))`.
pub fn deviation_bound(epsilon: f64, n: u64, sigma2: f64) -> f64 {
    2.0 * (-epsilon * epsilon * n as f64 / (2.0 * sigma2)).exp()
}
