//! Least-core and nucleolus linear programs over `y = (x_0, ..., x_{n-1}, eps)`.
//!
//! Each round minimizes `eps` subject to
//!
//! * `x_i >= v({i})`,
//! * `x(S) = v(S) - e_S` for every coalition fixed in an earlier round, and
//!   `x(N) = 1`,
//! * `x(S) + eps >= v(S)` for every other coalition whose indicator is not a
//!   combination of the fixed ones (those have constant excess),
//!
//! with the last family generated on demand. Rows with a positive multiplier
//! are tight at every optimum, so they are fixed at the round's level and the
//! next round starts; once the fixed coalitions span `Q^n` the payoff is
//! determined and is the nucleolus.

use num_traits::{One, Signed, Zero};

use super::separation::most_violated;
use super::span::Span;
use crate::coalition::Coalition;
use crate::error::{GameError, Result};
use crate::game::VotingGame;
use crate::lp::rowgen::{self, Row, RowGenSolution, Separator};
use crate::rational::{int, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Tag {
    Coalition(Coalition),
    Bound(usize),
    Fixed,
    Cap,
}

/// Payoffs and excesses of simple games lie in `[-1, 1]`.
fn box_bound() -> Rational {
    int(2)
}

#[derive(Clone)]
pub(crate) struct Stages<'a> {
    game: &'a VotingGame,
    lower: Vec<Rational>,
    fixed: Vec<(Coalition, Rational)>,
    span: Span,
}

/// One refinement round: its excess level and what it fixed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Round {
    pub level: Rational,
    /// Coalitions whose rows carry positive multipliers, in bit order.
    pub binding: Vec<Coalition>,
    /// Players whose lower bound `x_i >= v({i})` carries a positive multiplier.
    pub fixed_players: Vec<usize>,
}

impl<'a> Stages<'a> {
    pub(crate) fn new(game: &'a VotingGame) -> Result<Self> {
        let n = game.n();
        let lower: Vec<Rational> = (0..n).map(|i| game.value(Coalition::singleton(i))).collect();
        if lower.iter().filter(|l| l.is_one()).count() > 1 {
            return Err(GameError::NoImputation);
        }
        let mut span = Span::new(n);
        let grand = game.grand_coalition();
        span.add(grand)?;
        Ok(Stages {
            game,
            lower,
            fixed: vec![(grand, Rational::one())],
            span,
        })
    }

    pub(crate) fn is_determined(&self) -> bool {
        self.span.is_full()
    }

    fn fix(&mut self, s: Coalition, rhs: Rational) -> Result<()> {
        if self.span.add(s)? {
            self.fixed.push((s, rhs));
        }
        Ok(())
    }

    fn rows(&self, cap: Option<&Rational>) -> Vec<(Row, Tag)> {
        let n = self.game.n();
        let indicator = |s: Coalition, sign: i64| -> Vec<Rational> {
            (0..=n)
                .map(|i| if i < n && s.contains(i) { int(sign) } else { Rational::zero() })
                .collect()
        };
        let mut rows = Vec::new();
        for (i, l) in self.lower.iter().enumerate() {
            rows.push((Row::new(indicator(Coalition::singleton(i), 1), l.clone()), Tag::Bound(i)));
        }
        for (s, rhs) in &self.fixed {
            rows.push((Row::new(indicator(*s, 1), rhs.clone()), Tag::Fixed));
            rows.push((Row::new(indicator(*s, -1), -rhs.clone()), Tag::Fixed));
        }
        if let Some(cap) = cap {
            let mut a = vec![Rational::zero(); n + 1];
            a[n] = -Rational::one();
            rows.push((Row::new(a, -cap.clone()), Tag::Cap));
        }
        rows
    }

    /// Minimizes `objective . y` over the current round's feasible set,
    /// optionally with `eps <= cap`.
    pub(crate) fn solve(&self, objective: &[Rational], cap: Option<&Rational>) -> Result<RowGenSolution<Tag>> {
        let rows = self.rows(cap);
        let mut sep = CoalitionRows {
            game: self.game,
            span: &self.span,
        };
        rowgen::minimize(objective, &box_bound(), &rows, &mut sep)
    }

    fn eps_objective(&self) -> Vec<Rational> {
        let n = self.game.n();
        (0..=n).map(|i| if i == n { Rational::one() } else { Rational::zero() }).collect()
    }

    /// Solves one round and fixes its positive-multiplier rows.
    pub(crate) fn round(&mut self) -> Result<(Round, Vec<Rational>)> {
        let n = self.game.n();
        let sol = self.solve(&self.eps_objective(), None)?;
        let level = sol.y[n].clone();
        let rank = self.span.rank();
        let mut binding = Vec::new();
        let mut fixed_players = Vec::new();
        for (tag, lambda) in &sol.active {
            if !lambda.is_positive() {
                continue;
            }
            match *tag {
                Tag::Coalition(s) => binding.push(s),
                Tag::Bound(i) => fixed_players.push(i),
                Tag::Fixed | Tag::Cap => {}
            }
        }
        binding.sort();
        fixed_players.sort();
        for &s in &binding {
            self.fix(s, self.game.value(s) - &level)?;
        }
        for &i in &fixed_players {
            self.fix(Coalition::singleton(i), self.lower[i].clone())?;
        }
        if self.span.rank() == rank {
            return Err(GameError::Unsupported {
                operation: "nucleolus refinement",
                reason: "a round fixed no new coalition".into(),
            });
        }
        let mut y = sol.y;
        y.truncate(n);
        Ok((
            Round {
                level,
                binding,
                fixed_players,
            },
            y,
        ))
    }

    /// Whether the optimal face of the current round, with `eps` held at
    /// `level`, is a single point: `min x_i == max x_i` for every player.
    pub(crate) fn face_is_point(&self, level: &Rational) -> Result<bool> {
        let n = self.game.n();
        for i in 0..n {
            let mut c = vec![Rational::zero(); n + 1];
            c[i] = Rational::one();
            let lo = self.solve(&c, Some(level))?.y[i].clone();
            c[i] = -Rational::one();
            let hi = self.solve(&c, Some(level))?.y[i].clone();
            if lo != hi {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

struct CoalitionRows<'a> {
    game: &'a VotingGame,
    span: &'a Span,
}

impl Separator<Tag> for CoalitionRows<'_> {
    fn separate(&mut self, y: &[Rational]) -> Result<Option<(Row, Tag)>> {
        let n = self.game.n();
        let Some(s) = most_violated(self.game, self.span, &y[..n], &y[n]) else {
            return Ok(None);
        };
        let coeffs = (0..=n)
            .map(|i| if i == n || s.contains(i) { Rational::one() } else { Rational::zero() })
            .collect();
        Ok(Some((Row::new(coeffs, self.game.value(s)), Tag::Coalition(s))))
    }
}
