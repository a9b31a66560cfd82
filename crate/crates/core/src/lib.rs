//! Voting power in weighted majority games.
//!
//! The crate computes the Shapley-Shubik index and its relatives, the least
//! core and the nucleolus of simple voting games, all in exact rational
//! arithmetic, and ships the Council of Ministers voting configurations used
//! between 1958 and 2012.
//!
//! Coalition sweeps are data-parallel when the `parallel` feature (on by
//! default) is enabled; every sweep also accepts [`Execution::Sequential`].

pub mod coalition;
pub mod error;
pub mod eu;
pub mod exec;
pub mod game;
pub mod indices;
pub mod io;
pub mod lp;
pub mod rational;
pub mod solution;

pub use coalition::Coalition;
pub use error::{GameError, Result};
pub use exec::Execution;
pub use game::{Player, VotingGame, WeightedRule};
pub use indices::{IndexKind, PowerProfile};
pub use rational::Rational;
