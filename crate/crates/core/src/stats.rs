//! Per-arm sufficient statistics.

/// Pull counts, reward sums and running means for each arm, plus the number
/// of rewards recorded so far.
#[derive(Clone, Debug, PartialEq)]
pub struct ArmStatistics {
    pulls: Vec<u64>,
    sums: Vec<f64>,
    means: Vec<f64>,
    t: u64,
}

impl ArmStatistics {
    pub fn new(arms: usize) -> Self {
        ArmStatistics { pulls: vec![0; arms], sums: vec![0.0; arms], means: vec![0.0; arms], t: 0 }
    }

    /// Statistics with given counts and empirical means, as if the rewards
    /// had already been observed. Arms with zero pulls must have mean 0.
    pub fn from_parts(pulls: Vec<u64>, means: Vec<f64>) -> Self {
        assert_eq!(pulls.len(), means.len(), "pulls and means must have one entry per arm");
        let sums = pulls.iter().zip(&means).map(|(&n, &m)| n as f64 * m).collect();
        let means = pulls.iter().zip(means).map(|(&n, m)| if n == 0 { 0.0 } else { m }).collect();
        let t = pulls.iter().sum();
        ArmStatistics { pulls, sums, means, t }
    }

    pub fn record(&mut self, arm: usize, reward: f64) {
        self.pulls[arm] += 1;
        self.sums[arm] += reward;
        self.means[arm] = self.sums[arm] / self.pulls[arm] as f64;
        self.t += 1;
    }

    pub fn arms(&self) -> usize {
        self.pulls.len()
    }

    /// Number of rewards recorded, i.e. `t - 1` when choosing at step `t`.
    pub fn steps(&self) -> u64 {
        self.t
    }

    pub fn pulls(&self, arm: usize) -> u64 {
        self.pulls[arm]
    }

    pub fn all_pulls(&self) -> &[u64] {
        &self.pulls
    }

    /// Empirical mean of `arm`; 0 while the arm is unpulled.
    pub fn mean(&self, arm: usize) -> f64 {
        self.means[arm]
    }

    pub fn means(&self) -> &[f64] {
        &self.means
    }

    pub fn sum(&self, arm: usize) -> f64 {
        self.sums[arm]
    }

    /// Lowest-index arm among those pulled least often.
    pub fn least_pulled(&self) -> usize {
        let mut best = 0;
        for (i, &n) in self.pulls.iter().enumerate() {
            if n < self.pulls[best] {
                best = i;
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn counts_and_means_stay_consistent(draws in prop::collection::vec((0usize..3, -5.0f64..5.0), 0..200)) {
            let mut s = ArmStatistics::new(3);
            for &(arm, r) in &draws {
                s.record(arm, r);
            }
            prop_assert_eq!(s.all_pulls().iter().sum::<u64>(), s.steps());
            prop_assert_eq!(s.steps(), draws.len() as u64);
            for arm in 0..3 {
                if s.pulls(arm) > 0 {
                    prop_assert_eq!(s.mean(arm), s.sum(arm) / s.pulls(arm) as f64);
                }
            }
        }
    }

    #[test]
    fn least_pulled_ties_low() {
        let s = ArmStatistics::from_parts(vec![3, 1, 1], vec![0.0, 0.0, 0.0]);
        assert_eq!(s.least_pulled(), 1);
        assert_eq!(s.steps(), 5);
    }
}
