//! The reward process for one episode.

use std::sync::Arc;

use crate::error::Result;
use crate::problem::{StructuredBandit, Theta};
use crate::rng::RewardStream;
use crate::stats::ArmStatistics;

/// A bandit with its true parameter and a private noise stream. Rewards of
/// arm `k` are drawn from `N(mu_k(theta*), sigma2)`.
#[derive(Clone, Debug)]
pub struct Environment {
    bandit: Arc<StructuredBandit>,
    theta_star: Theta,
    true_means: Vec<f64>,
    sd: f64,
    noise: RewardStream,
}

impl Environment {
    /// Environment using noise stream `stream` of `seed`.
    pub fn new(bandit: Arc<StructuredBandit>, theta_star: Theta, seed: u64, stream: u64) -> Result<Self> {
        let true_means = bandit.means_at(&theta_star)?;
        let sd = bandit.sigma2().sqrt();
        Ok(Environment { bandit, theta_star, true_means, sd, noise: RewardStream::new(seed, stream) })
    }

    pub fn bandit(&self) -> &StructuredBandit {
        &self.bandit
    }

    pub fn shared_bandit(&self) -> Arc<StructuredBandit> {
        Arc::clone(&self.bandit)
    }

    pub fn theta_star(&self) -> &Theta {
        &self.theta_star
    }

    pub fn true_means(&self) -> &[f64] {
        &self.true_means
    }

    /// Draw a reward from `arm` and record it in `stats`.
    pub fn sample_reward(&mut self, arm: usize, stats: &mut ArmStatistics) -> Result<f64> {
        self.bandit.check_arm(arm)?;
        let z = self.noise.standard_normal();
        let reward = self.true_means[arm] + self.sd * z;
        stats.record(arm, reward);
        Ok(reward)
    }
}
