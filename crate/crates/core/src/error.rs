use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("arm index {arm} out of range for a {arms}-armed bandit")]
    ArmOutOfRange { arm: usize, arms: usize },

    #[error("parameter {0} lies outside the parameter space")]
    ThetaOutsideSpace(String),

    #[error("unknown problem `{0}`")]
    UnknownProblem(String),

    #[error("invalid problem definition: {0}")]
    InvalidProblem(String),

    #[error("the parameter space carries no ambiguous-region marking")]
    MissingAmbiguousRegion,

    #[error("policy `{policy}` cannot run on this problem: {reason}")]
    PolicyMismatch { policy: String, reason: String },

    #[error("unknown policy `{0}`")]
    UnknownPolicy(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("operation not supported for this parameter space: {0}")]
    Unsupported(String),

    #[error("gap is zero at the queried parameter")]
    ZeroGap,

    #[error("malformed table: {0}")]
    Table(String),

    #[error("config parse error: {0}")]
    Config(#[from] toml::de::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
