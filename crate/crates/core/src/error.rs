use std::path::PathBuf;

use thiserror::Error;

use crate::lp::LpError;

pub type Result<T, E = GameError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum GameError {
    #[error("void game: quota {quota} is not attainable with total weight {total}")]
    VoidGame { quota: String, total: String },
    #[error("quota must be positive, got {0}")]
    NonPositiveQuota(String),
    #[error("negative weight {weight} for player {player}")]
    NegativeWeight { player: usize, weight: String },
    #[error("rule has {got} weights but the game has {expected} players")]
    WeightCount { expected: usize, got: usize },
    #[error("a game needs at least one player and one rule")]
    Empty,
    #[error("games with {0} players are not supported (at most 64)")]
    TooManyPlayers(usize),
    #[error("duplicate player label {0:?}")]
    DuplicateLabel(String),
    #[error("games being intersected have different player lists")]
    MismatchedPlayers,
    #[error("{operation} is limited to {limit} players, game has {players}")]
    Capability {
        operation: &'static str,
        limit: usize,
        players: usize,
    },
    #[error("{operation} is not available for this game: {reason}")]
    Unsupported {
        operation: &'static str,
        reason: String,
    },
    #[error("integer weight representation overflows 64 bits")]
    WeightOverflow,
    #[error("the game has no imputation (several winning singletons)")]
    NoImputation,
    #[error("{0} is not an imputation")]
    NotAnImputation(String),
    #[error("invalid rational {0:?}")]
    ParseRational(String),
    #[error("linear program failed: {0}")]
    Lp(#[from] LpError),
    #[error("{path}: {message}")]
    File { path: PathBuf, message: String },
    #[error("{0}")]
    Config(String),
    #[error("certificate check failed: {0}")]
    Certificate(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl GameError {
    pub(crate) fn capability(operation: &'static str, limit: usize, players: usize) -> Self {
        GameError::Capability {
            operation,
            limit,
            players,
        }
    }

    pub(crate) fn file(path: impl Into<PathBuf>, message: impl ToString) -> Self {
        GameError::File {
            path: path.into(),
            message: message.to_string(),
        }
    }
}
