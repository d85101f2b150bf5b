//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid distribution parameters: {0}")]
    InvalidParams(String),
    #[error("value {0} outside the support")]
    OutOfSupport(f64),
    #[error("density is zero at {0}")]
    ZeroDensity(f64),
    #[error("distribution has no density")]
    NoDensity,
    #[error("objective is unbounded")]
    Unbounded,
    #[error("ironing grid must have at least 16 points (got {0})")]
    GridTooCoarse(usize),
    #[error("empty sample")]
    Empty,
    #[error("mechanism parameters sized for {expected} bidders, bid profile has {got}")]
    InconsistentArity { expected: usize, got: usize },
    #[error("at least 2 bidders required")]
    DegenerateCompetition,
    #[error("distribution is not regular")]
    NotRegular,
    #[error("guard removes every sample")]
    AllRemoved,
    #[error("search space of {0} candidates exceeds the exhaustive-search guard")]
    SearchSpaceTooLarge(u128),
    #[error("reward {0} outside [0, 1]")]
    RewardOutOfRange(f64),
    #[error("budget must be positive")]
    NonpositiveBudget,
    #[error("bid function is not increasing")]
    NonMonotone,
    #[error("constructed strategy is not increasing")]
    NotIncreasing,
    #[error("no root in the search interval")]
    NoRoot,
    #[error("discrete value distribution required")]
    RequiresDiscrete,
    #[error("invalid config at {path}: {message}")]
    InvalidConfig { path: String, message: String },
    #[error("report does not contain the series {0:?}")]
    MissingSeries(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
