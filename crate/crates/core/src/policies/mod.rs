//! Arm-selection policies.
//!
//! Policies are named `ucb`, `ucbs`, `ucbs-ra` and `phased`, optionally
//! followed by `:alpha` (for example `ucbs:4`). Every policy picks its arm
//! at step `t = stats.steps() + 1`.

pub mod confidence;
pub mod phased;
pub mod risk_averse;
pub mod ucb;

use std::fmt;

pub use confidence::{confidence_radius, plausible_parameters, ConfidenceSet, SetMode};
pub use phased::{phased_step, PhasedState};
pub use risk_averse::{ucbs_ra_select, RiskAverseState};
pub use ucb::{ucb_select, ucbs_select};

use crate::error::{Error, Result};
use crate::problem::StructuredBandit;
use crate::stats::ArmStatistics;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolicyKind {
    Ucb,
    Ucbs,
    UcbsRa,
    Phased,
}

impl PolicyKind {
    pub fn id(self) -> &'static str {
        match self {
            PolicyKind::Ucb => "ucb",
            PolicyKind::Ucbs => "ucbs",
            PolicyKind::UcbsRa => "ucbs-ra",
            PolicyKind::Phased => "phased",
        }
    }

    pub fn default_alpha(self) -> f64 {
        match self {
            PolicyKind::Ucb => 2.0,
            PolicyKind::Ucbs | PolicyKind::UcbsRa => 4.0,
            PolicyKind::Phased => phased::PHASED_ALPHA,
        }
    }

    pub fn from_id(id: &str) -> Result<Self> {
        match id {
            "ucb" => Ok(PolicyKind::Ucb),
            "ucbs" => Ok(PolicyKind::Ucbs),
            "ucbs-ra" => Ok(PolicyKind::UcbsRa),
            "phased" => Ok(PolicyKind::Phased),
            other => Err(Error::UnknownPolicy(other.to_string())),
        }
    }
}

/// A policy identifier plus its tunables.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolicySpec {
    pub kind: PolicyKind,
    pub alpha: f64,
    pub mode: SetMode,
}

impl PolicySpec {
    pub fn new(kind: PolicyKind) -> Self {
        PolicySpec { kind, alpha: kind.default_alpha(), mode: SetMode::Exact }
    }

    pub fn with_alpha(mut self, alpha: f64) -> Result<Self> {
        if self.kind == PolicyKind::Phased && alpha != phased::PHASED_ALPHA {
            return Err(Error::InvalidArgument("phased uses a fixed alpha of 5".into()));
        }
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidArgument(format!("alpha must be positive, got {alpha}")));
        }
        self.alpha = alpha;
        Ok(self)
    }

    pub fn with_mode(mut self, mode: SetMode) -> Self {
        self.mode = mode;
        self
    }

    /// Parses `name` or `name:alpha`.
    pub fn parse(text: &str) -> Result<Self> {
        let (name, alpha) = match text.split_once(':') {
            Some((n, a)) => {
                let a: f64 =
                    a.trim().parse().map_err(|_| Error::InvalidArgument(format!("bad alpha in `{text}`")))?;
                (n.trim(), Some(a))
            }
            None => (text.trim(), None),
        };
        let spec = PolicySpec::new(PolicyKind::from_id(name)?);
        match alpha {
            Some(a) => spec.with_alpha(a),
            None => Ok(spec),
        }
    }

    pub fn id(&self) -> &'static str {
        self.kind.id()
    }

    /// Checks the policy can run on `bandit` and returns fresh state.
    pub fn build(&self, bandit: &StructuredBandit) -> Result<Policy> {
        let state = match self.kind {
            PolicyKind::Ucb => State::Stateless,
            PolicyKind::Ucbs => State::Stateless,
            PolicyKind::UcbsRa => {
                if !bandit.space().has_ambiguous_marks() {
                    return Err(Error::MissingAmbiguousRegion);
                }
                State::RiskAverse(RiskAverseState::default())
            }
            PolicyKind::Phased => {
                if bandit.arms() != 2 {
                    return Err(Error::PolicyMismatch {
                        policy: "phased".into(),
                        reason: format!("needs exactly 2 arms, problem has {}", bandit.arms()),
                    });
                }
                State::Phased(PhasedState::new())
            }
        };
        Ok(Policy { spec: *self, state })
    }
}

impl fmt::Display for PolicySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.id(), self.alpha)
    }
}

impl std::str::FromStr for PolicySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PolicySpec::parse(s)
    }
}

#[derive(Clone, Debug)]
enum State {
    Stateless,
    RiskAverse(RiskAverseState),
    Phased(PhasedState),
}

/// A running policy instance owned by one episode.
#[derive(Clone, Debug)]
pub struct Policy {
    spec: PolicySpec,
    state: State,
}

impl Policy {
    pub fn spec(&self) -> &PolicySpec {
        &self.spec
    }

    pub fn select(&mut self, bandit: &StructuredBandit, stats: &ArmStatistics) -> Result<usize> {
        let t = stats.steps() + 1;
        let PolicySpec { alpha, mode, .. } = self.spec;
        Ok(match &mut self.state {
            State::Stateless if self.spec.kind == PolicyKind::Ucb => ucb_select(stats, t, alpha, bandit.sigma2()),
            State::Stateless => ucbs_select(bandit, stats, t, alpha, mode),
            State::RiskAverse(state) => {
                let (arm, next) = ucbs_ra_select(bandit, stats, *state, t, alpha, mode)?;
                *state = next;
                arm
            }
            State::Phased(state) => state.next_arm(),
        })
    }

    pub fn observe(&mut self, arm: usize, reward: f64) {
        if let State::Phased(state) = &mut self.state {
            state.observe(arm, reward);
        }
    }
}
