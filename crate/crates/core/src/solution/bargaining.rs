//! Objections and counter-objections for the bargaining set.
//!
//! At payoff `x`, an objection of `i` against `j` is a coalition `S` with
//! `i ∈ S`, `j ∉ S` and a payoff `y` on `S` with `y(S) = v(S)` and `y_k > x_k`
//! for all `k ∈ S`. A counter-objection is a coalition `T` with `j ∈ T`,
//! `i ∉ T` and a payoff `z` with `z(T) = v(T)`, `z_k >= y_k` on `T ∩ S` and
//! `z_k >= x_k` on `T \ S`; one exists iff `y(T ∩ S) + x(T \ S) <= v(T)`.
//!
//! For each `(i, j, S)` an LP maximizes the slack `t` in
//! `y_k - x_k >= t` and `y(T ∩ S) + x(T \ S) - v(T) >= t` for every such `T`.
//! The objection is justified (admits no counter-objection) iff `t > 0`.

use num_traits::{One, Signed, Zero};

use super::Imputation;
use crate::coalition::Coalition;
use crate::error::{GameError, Result};
use crate::game::VotingGame;
use crate::lp::{LinearProgram, Relation, Sense};
use crate::rational::Rational;

pub const BARGAINING_LIMIT: usize = 5;

/// A justified objection of `objector` against `target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Objection {
    pub objector: usize,
    pub target: usize,
    pub coalition: Coalition,
    /// Proposed payoff, indexed by player; zero outside the coalition.
    pub payoff: Vec<Rational>,
}

/// The first justified objection at `x` (ordered by objector, target, then
/// coalition bits), or `None` when `x` is in the bargaining set.
pub fn has_justified_objection(game: &VotingGame, x: &[Rational]) -> Result<Option<Objection>> {
    let n = game.n();
    if n > BARGAINING_LIMIT {
        return Err(GameError::capability("bargaining-set check", BARGAINING_LIMIT, n));
    }
    let x = Imputation::new(game, x.to_vec())?.into_values();
    let grand = game.grand_coalition();
    let paid = |s: Coalition| s.members().fold(Rational::zero(), |acc, k| acc + &x[k]);
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            for s in grand.subsets().filter(|s| s.contains(i) && !s.contains(j)) {
                if game.value(s) <= paid(s) {
                    continue;
                }
                if let Some(payoff) = justified(game, &x, i, j, s)? {
                    return Ok(Some(Objection {
                        objector: i,
                        target: j,
                        coalition: s,
                        payoff,
                    }));
                }
            }
        }
    }
    Ok(None)
}

fn justified(game: &VotingGame, x: &[Rational], i: usize, j: usize, s: Coalition) -> Result<Option<Vec<Rational>>> {
    let members: Vec<usize> = s.members().collect();
    let m = members.len();
    // variables: y for each member of S, then t
    let t = m;
    let mut objective = vec![Rational::zero(); m + 1];
    objective[t] = Rational::one();
    let mut lp = LinearProgram::new(m + 1, Sense::Maximize, objective);
    for v in 0..=m {
        lp.set_free(v);
    }
    for (v, &k) in members.iter().enumerate() {
        lp.constrain(&[(v, Rational::one()), (t, -Rational::one())], Relation::Ge, x[k].clone());
    }
    let all: Vec<(usize, Rational)> = (0..m).map(|v| (v, Rational::one())).collect();
    lp.constrain(&all, Relation::Eq, game.value(s));
    lp.constrain(&[(t, Rational::one())], Relation::Le, Rational::one());
    for tc in game
        .grand_coalition()
        .subsets()
        .filter(|c| c.contains(j) && !c.contains(i))
    {
        let mut coeffs: Vec<(usize, Rational)> = members
            .iter()
            .enumerate()
            .filter(|(_, &k)| tc.contains(k))
            .map(|(v, _)| (v, Rational::one()))
            .collect();
        coeffs.push((t, -Rational::one()));
        let outside = tc.difference(s).members().fold(Rational::zero(), |acc, k| acc + &x[k]);
        lp.constrain(&coeffs, Relation::Ge, game.value(tc) - outside);
    }
    let sol = lp.solve()?;
    if !sol.value.is_positive() {
        return Ok(None);
    }
    let mut payoff = vec![Rational::zero(); game.n()];
    for (v, &k) in members.iter().enumerate() {
        payoff[k] = sol.x[v].clone();
    }
    Ok(Some(payoff))
}
