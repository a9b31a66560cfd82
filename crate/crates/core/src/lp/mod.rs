//! Exact rational linear programming.
//!
//! [`simplex`] is a revised primal simplex with Bland's rule over an explicit
//! or implicitly priced column set. [`rowgen`] is a dual simplex for
//! `min c.y` subject to `A y >= b` whose rows are produced on demand by a
//! separation routine.

pub mod rowgen;
pub mod simplex;

use thiserror::Error;

pub use rowgen::{Row, RowGenSolution, Separator};
pub use simplex::{ColumnSource, LinearProgram, LpSolution, Relation, Sense};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LpError {
    #[error("the linear program is infeasible")]
    Infeasible,
    #[error("the linear program is unbounded")]
    Unbounded,
    #[error("the starting basis is invalid: {0}")]
    InvalidBasis(String),
    #[error("no convergence after {0} pivots")]
    IterationLimit(usize),
}
