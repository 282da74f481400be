//! Deterministic Monte-Carlo experiments.
//!
//! Replication `r` of an experiment with base seed `s` draws its rewards
//! from noise stream `r` of seed `s` (see [`crate::rng`]); sweep point `j`
//! uses base seed `mix_seed(s, j)`. Regret is pseudo-regret,
//! `sum_i gap_i * pulls_i`. Replications run in parallel and are reduced
//! in replication order, so results do not depend on the worker count.

pub mod format;

use std::sync::Arc;

use rayon::prelude::*;

pub use format::{format_g, read_table, write_table, Table};

use crate::env::Environment;
use crate::error::{Error, Result};
use crate::policies::PolicySpec;
use crate::problem::{StructuredBandit, Theta};
use crate::rng::{mix_seed, RewardStream};
use crate::stats::ArmStatistics;

#[derive(Clone, Debug, PartialEq)]
pub enum Checkpoints {
    /// `1, ceil(1.25), ...` growing by `ratio` (at least one step), then `n`.
    Geometric { ratio: f64 },
    /// Multiples of `every`, then `n`.
    Every(u64),
    Explicit(Vec<u64>),
}

impl Default for Checkpoints {
    fn default() -> Self {
        Checkpoints::Geometric { ratio: 1.25 }
    }
}

impl Checkpoints {
    /// Sorted checkpoint times ending with `horizon`.
    pub fn resolve(&self, horizon: u64) -> Result<Vec<u64>> {
        if horizon == 0 {
            return Err(Error::InvalidArgument("horizon must be at least 1".into()));
        }
        let mut out = match self {
            Checkpoints::Geometric { ratio } => {
                if !(*ratio > 1.0) {
                    return Err(Error::InvalidArgument(format!("checkpoint ratio must exceed 1, got {ratio}")));
                }
                let mut v = Vec::new();
                let mut t = 1u64;
                while t < horizon {
                    v.push(t);
                    t = ((t as f64 * ratio).ceil() as u64).max(t + 1);
                }
                v
            }
            Checkpoints::Every(k) => {
                if *k == 0 {
                    return Err(Error::InvalidArgument("checkpoint spacing must be positive".into()));
                }
                (1..).map(|j| j * k).take_while(|&t| t < horizon).collect()
            }
            Checkpoints::Explicit(v) => {
                if v.windows(2).any(|w| w[0] >= w[1]) || v.first() == Some(&0) || v.last().is_some_and(|&t| t > horizon) {
                    return Err(Error::InvalidArgument("checkpoints must be increasing within 1..=horizon".into()));
                }
                v.iter().copied().filter(|&t| t < horizon).collect()
            }
        };
        out.push(horizon);
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EpisodeResult {
    pub checkpoints: Vec<u64>,
    /// Cumulative pseudo-regret at each checkpoint.
    pub regret: Vec<f64>,
    /// Final pull counts.
    pub pulls: Vec<u64>,
}

fn pseudo_regret(gaps: &[f64], pulls: &[u64]) -> f64 {
    gaps.iter().zip(pulls).map(|(&g, &n)| g * n as f64).sum()
}

/// Runs one episode; `observe(t, stats)` is called before the selection at
/// every step `t` with the statistics of the first `t - 1` rewards.
pub fn run_episode_observed(
    env: &mut Environment,
    policy: &PolicySpec,
    horizon: u64,
    checkpoints: &[u64],
    mut observe: impl FnMut(u64, &ArmStatistics),
) -> Result<EpisodeResult> {
    let bandit = env.shared_bandit();
    let mut state = policy.build(&bandit)?;
    let gaps = crate::problem::GapProfile::from_means(env.true_means()).gaps;
    let mut stats = ArmStatistics::new(bandit.arms());
    let mut regret = Vec::with_capacity(checkpoints.len());
    let mut next = checkpoints.iter().peekable();
    for t in 1..=horizon {
        observe(t, &stats);
        let arm = state.select(&bandit, &stats)?;
        let reward = env.sample_reward(arm, &mut stats)?;
        state.observe(arm, reward);
        while next.peek().is_some_and(|&&c| c == t) {
            regret.push(pseudo_regret(&gaps, stats.all_pulls()));
            next.next();
        }
    }
    Ok(EpisodeResult { checkpoints: checkpoints.to_vec(), regret, pulls: stats.all_pulls().to_vec() })
}

pub fn run_episode(env: &mut Environment, policy: &PolicySpec, horizon: u64, checkpoints: &[u64]) -> Result<EpisodeResult> {
    run_episode_observed(env, policy, horizon, checkpoints, |_, _| {})
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub bandit: Arc<StructuredBandit>,
    pub policy: PolicySpec,
    pub theta: Theta,
    pub horizon: u64,
    pub reps: usize,
    pub seed: u64,
    pub checkpoints: Checkpoints,
    /// Worker threads; 0 uses every available core.
    pub workers: usize,
    /// Index of the first replication's noise stream.
    pub rep_offset: u64,
}

impl ExperimentConfig {
    pub fn new(bandit: StructuredBandit, policy: PolicySpec, theta: impl Into<Theta>, horizon: u64) -> Self {
        ExperimentConfig {
            bandit: Arc::new(bandit),
            policy,
            theta: theta.into(),
            horizon,
            reps: 1,
            seed: 0,
            checkpoints: Checkpoints::default(),
            workers: 0,
            rep_offset: 0,
        }
    }

    pub fn reps(mut self, reps: usize) -> Self {
        self.reps = reps;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn checkpoints(mut self, c: Checkpoints) -> Self {
        self.checkpoints = c;
        self
    }

    pub fn workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn rep_offset(mut self, offset: u64) -> Self {
        self.rep_offset = offset;
        self
    }
}

/// Mean regret over replications at each checkpoint.
#[derive(Clone, Debug, PartialEq)]
pub struct RegretCurve {
    pub policy: PolicySpec,
    pub theta: Theta,
    pub seed: u64,
    pub checkpoints: Vec<u64>,
    /// `per_rep[r][j]`: regret of replication `r` at checkpoint `j`.
    pub per_rep: Vec<Vec<f64>>,
    pub mean: Vec<f64>,
    pub std_error: Vec<f64>,
}

impl RegretCurve {
    fn from_reps(policy: PolicySpec, theta: Theta, seed: u64, checkpoints: Vec<u64>, per_rep: Vec<Vec<f64>>) -> Self {
        let (mean, std_error) = (0..checkpoints.len())
            .map(|j| mean_and_se(per_rep.iter().map(|r| r[j])))
            .unzip();
        RegretCurve { policy, theta, seed, checkpoints, per_rep, mean, std_error }
    }

    pub fn reps(&self) -> usize {
        self.per_rep.len()
    }

    pub fn terminal(&self) -> Vec<f64> {
        self.per_rep.iter().map(|r| *r.last().expect("at least one checkpoint")).collect()
    }

    pub fn terminal_mean(&self) -> f64 {
        *self.mean.last().expect("at least one checkpoint")
    }

    pub fn terminal_std_error(&self) -> f64 {
        *self.std_error.last().expect("at least one checkpoint")
    }

    /// Mean and standard error at checkpoint time `t`.
    pub fn at(&self, t: u64) -> Option<(f64, f64)> {
        let j = self.checkpoints.iter().position(|&c| c == t)?;
        Some((self.mean[j], self.std_error[j]))
    }

    /// Concatenates the replications of two runs over the same checkpoints.
    pub fn pool(&self, other: &RegretCurve) -> Result<RegretCurve> {
        if self.checkpoints != other.checkpoints {
            return Err(Error::InvalidArgument("pooled curves need identical checkpoints".into()));
        }
        let mut per_rep = self.per_rep.clone();
        per_rep.extend(other.per_rep.iter().cloned());
        Ok(Self::from_reps(self.policy, self.theta.clone(), self.seed, self.checkpoints.clone(), per_rep))
    }
}

/// Sample mean and standard error of the mean, summed in iteration order.
pub fn mean_and_se(values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = values.clone().count();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.clone().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = values.map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

fn with_workers<T: Send>(workers: usize, job: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(job))
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<RegretCurve> {
    if config.reps == 0 {
        return Err(Error::InvalidArgument("replication count must be at least 1".into()));
    }
    let checkpoints = config.checkpoints.resolve(config.horizon)?;
    config.bandit.check_theta(&config.theta)?;
    config.policy.build(&config.bandit)?;
    let per_rep = with_workers(config.workers, || {
        (0..config.reps as u64)
            .into_par_iter()
            .map(|r| {
                let mut env = Environment::new(
                    Arc::clone(&config.bandit),
                    config.theta.clone(),
                    config.seed,
                    config.rep_offset + r,
                )?;
                Ok(run_episode(&mut env, &config.policy, config.horizon, &checkpoints)?.regret)
            })
            .collect::<Result<Vec<_>>>()
    })??;
    Ok(RegretCurve::from_reps(config.policy, config.theta.clone(), config.seed, checkpoints, per_rep))
}

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub bandit: Arc<StructuredBandit>,
    pub policies: Vec<PolicySpec>,
    pub theta_min: f64,
    pub theta_max: f64,
    pub theta_steps: usize,
    pub horizon: u64,
    pub reps: usize,
    pub seed: u64,
    pub workers: usize,
}

/// Equally spaced sweep points; computed as a weighted average of the end
/// points so that symmetric ranges hit 0 exactly.
pub fn sweep_points(min: f64, max: f64, steps: usize) -> Vec<f64> {
    if steps == 1 {
        return vec![min];
    }
    let d = (steps - 1) as f64;
    (0..steps).map(|j| (min * (d - j as f64) + max * j as f64) / d).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub thetas: Vec<f64>,
    pub policies: Vec<PolicySpec>,
    /// `mean[p][j]`: mean terminal regret of policy `p` at `thetas[j]`.
    pub mean: Vec<Vec<f64>>,
    pub std_error: Vec<Vec<f64>>,
}

/// Terminal mean regret per policy and sweep point. All policies see the
/// same reward noise at a given point and replication.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepResult> {
    if config.reps == 0 || config.theta_steps == 0 || config.policies.is_empty() {
        return Err(Error::InvalidArgument("sweeps need reps >= 1, steps >= 1 and a policy".into()));
    }
    if !(config.theta_min <= config.theta_max) {
        return Err(Error::InvalidArgument("theta-min must not exceed theta-max".into()));
    }
    let thetas = sweep_points(config.theta_min, config.theta_max, config.theta_steps);
    for &x in &thetas {
        config.bandit.check_theta(&Theta::Real(x))?;
    }
    for p in &config.policies {
        p.build(&config.bandit)?;
    }
    let horizon = config.horizon;
    let checkpoints = Checkpoints::Explicit(vec![]).resolve(horizon)?;
    let jobs: Vec<(usize, usize, u64)> = (0..config.policies.len())
        .flat_map(|p| (0..thetas.len()).flat_map(move |j| (0..config.reps as u64).map(move |r| (p, j, r))))
        .collect();
    let terminal = with_workers(config.workers, || {
        jobs.par_iter()
            .map(|&(p, j, r)| {
                let seed = mix_seed(config.seed, j as u64);
                let mut env = Environment::new(Arc::clone(&config.bandit), Theta::Real(thetas[j]), seed, r)?;
                Ok(run_episode(&mut env, &config.policies[p], horizon, &checkpoints)?.regret[0])
            })
            .collect::<Result<Vec<f64>>>()
    })??;
    let reps = config.reps;
    let mut mean = vec![Vec::new(); config.policies.len()];
    let mut std_error = vec![Vec::new(); config.policies.len()];
    for p in 0..config.policies.len() {
        for j in 0..thetas.len() {
            let start = (p * thetas.len() + j) * reps;
            let (m, se) = mean_and_se(terminal[start..start + reps].iter().copied());
            mean[p].push(m);
            std_error[p].push(se);
        }
    }
    Ok(SweepResult { thetas, policies: config.policies.clone(), mean, std_error })
}

impl SweepResult {
    pub fn to_table(&self, meta: Vec<(String, String)>) -> Table {
        let mut columns = vec!["theta".to_string()];
        columns.extend(self.policies.iter().map(|p| p.to_string()));
        let rows = (0..self.thetas.len())
            .map(|j| {
                let mut row = vec![self.thetas[j]];
                row.extend(self.mean.iter().map(|m| m[j]));
                row
            })
            .collect();
        Table { meta, columns, rows }
    }
}

/// Table of mean regret against time, one column per curve. All curves
/// must share checkpoints.
pub fn curves_table(curves: &[RegretCurve], meta: Vec<(String, String)>) -> Result<Table> {
    let first = curves.first().ok_or_else(|| Error::InvalidArgument("no curves to tabulate".into()))?;
    if curves.iter().any(|c| c.checkpoints != first.checkpoints) {
        return Err(Error::InvalidArgument("curves need identical checkpoints".into()));
    }
    let mut columns = vec!["n".to_string()];
    columns.extend(curves.iter().map(|c| c.policy.to_string()));
    let rows = first
        .checkpoints
        .iter()
        .enumerate()
        .map(|(j, &t)| {
            let mut row = vec![t as f64];
            row.extend(curves.iter().map(|c| c.mean[j]));
            row
        })
        .collect();
    Ok(Table { meta, columns, rows })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConcentrationReport {
    pub trials: u64,
    pub exceedances: u64,
    pub frequency: f64,
    pub bound: f64,
    /// `bound + 3` binomial standard errors at the bound.
    pub ceiling: f64,
}

impl ConcentrationReport {
    pub fn holds(&self) -> bool {
        self.frequency <= self.ceiling
    }
}

/// Frequency of `|mean of n draws - mu| >= epsilon` over `trials`
/// independent samples of `N(0, sigma2)` draws.
pub fn concentration_test(epsilon: f64, n: u64, sigma2: f64, trials: u64, seed: u64, workers: usize) -> Result<ConcentrationReport> {
    if n == 0 || trials == 0 || !(sigma2 > 0.0) || !(epsilon > 0.0) {
        return Err(Error::InvalidArgument("concentration test needs positive epsilon, n, trials and sigma2".into()));
    }
    let sd = sigma2.sqrt();
    const CHUNK: u64 = 4096;
    let chunks = trials.div_ceil(CHUNK);
    let exceedances: u64 = with_workers(workers, || {
        (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut rng = RewardStream::new(seed, c);
                let count = CHUNK.min(trials - c * CHUNK);
                (0..count)
                    .filter(|_| {
                        let s: f64 = (0..n).map(|_| sd * rng.standard_normal()).sum();
                        (s / n as f64).abs() >= epsilon
                    })
                    .count() as u64
            })
            .collect::<Vec<u64>>()
            .into_iter()
            .sum()
    })?;
    let bound = crate::theory::deviation_bound(epsilon, n, sigma2);
    let p = bound.min(1.0);
    let ceiling = bound + 3.0 * (p * (1.0 - p) / trials as f64).sqrt();
    Ok(ConcentrationReport { trials, exceedances, frequency: exceedances as f64 / trials as f64, bound, ceiling })
}
