//! Phase-based policy for two-armed problems where arm 0 is safe and arm 1
//! is risky.
//!
//! Phase `l` (starting at 2) pulls arm 0 `2^l` times, then arm 1 `l^2`
//! times, then extends a run of one arm while its phase mean stays above a
//! threshold. Only rewards from the current phase enter the phase means.

pub const PHASED_ALPHA: f64 = 5.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhaseMode {
    ForcedFirst,
    ForcedSecond,
    ExtendFirst,
    ExtendSecond,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PhasedState {
    phase: u32,
    mode: PhaseMode,
    counts: [u64; 2],
    sums: [f64; 2],
    pending: Option<usize>,
}

impl Default for PhasedState {
    fn default() -> Self {
        Self::new()
    }
}

fn lnln(n: u64) -> f64 {
    (n as f64).ln().ln()
}

/// Lower threshold for arm 0's phase mean after `n` pulls.
pub fn first_arm_threshold(n: u64) -> f64 {
    -(PHASED_ALPHA * lnln(n) / n as f64).sqrt()
}

impl PhasedState {
    pub fn new() -> Self {
        PhasedState { phase: 2, mode: PhaseMode::ForcedFirst, counts: [0; 2], sums: [0.0; 2], pending: None }
    }

    pub fn phase(&self) -> u32 {
        self.phase
    }

    pub fn mode(&self) -> PhaseMode {
        self.mode
    }

    pub fn forced_counts(phase: u32) -> (u64, u64) {
        (1u64 << phase, (phase as u64).pow(2))
    }

    fn phase_mean(&self, arm: usize) -> f64 {
        self.sums[arm] / self.counts[arm] as f64
    }

    /// Records the reward of the most recent pull.
    pub fn observe(&mut self, arm: usize, reward: f64) {
        self.counts[arm] += 1;
        self.sums[arm] += reward;
        self.pending = None;
    }

    fn next_phase(&mut self) {
        self.phase += 1;
        self.mode = PhaseMode::ForcedFirst;
        self.counts = [0; 2];
        self.sums = [0.0; 2];
    }

    /// Arm to pull next, given everything observed so far.
    pub fn next_arm(&mut self) -> usize {
        loop {
            let (n1, n2) = Self::forced_counts(self.phase);
            match self.mode {
                PhaseMode::ForcedFirst => {
                    if self.counts[0] < n1 {
                        break self.pull(0);
                    }
                    self.mode = PhaseMode::ForcedSecond;
                }
                PhaseMode::ForcedSecond => {
                    if self.counts[1] < n2 {
                        break self.pull(1);
                    }
                    let first_ok = self.phase_mean(0) >= first_arm_threshold(n1);
                    self.mode = if first_ok && self.phase_mean(1) < -0.5 {
                        PhaseMode::ExtendFirst
                    } else {
                        PhaseMode::ExtendSecond
                    };
                }
                PhaseMode::ExtendFirst => {
                    if self.phase_mean(0) >= first_arm_threshold(self.counts[0]) {
                        break self.pull(0);
                    }
                    self.next_phase();
                }
                PhaseMode::ExtendSecond => {
                    if self.phase_mean(1) >= -0.5 {
                        break self.pull(1);
                    }
                    self.next_phase();
                }
            }
        }
    }

    fn pull(&mut self, arm: usize) -> usize {
        self.pending = Some(arm);
        arm
    }

    /// Feeds the reward of the previous pull (if any) and returns the next
    /// arm.
    pub fn step(&mut self, last_reward: Option<f64>) -> usize {
        if let (Some(arm), Some(r)) = (self.pending, last_reward) {
            self.observe(arm, r);
        }
        self.next_arm()
    }
}

/// Functional form of [`PhasedState::step`].
pub fn phased_step(state: &PhasedState, last_reward: Option<f64>) -> (usize, PhasedState) {
    let mut next = state.clone();
    let arm = next.step(last_reward);
    (arm, next)
}
