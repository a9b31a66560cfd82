//! Most-violated coalition search for the least-core rows `x(S) + eps >= v(S)`.
//!
//! With `x >= 0` the search splits in two: the cheapest winning coalition
//! (minimum `x(S)` subject to meeting every rule) and the cheapest losing
//! one. Payoffs are scaled to integers over a common denominator first, so
//! all comparisons are exact. Ties go to the lowest bit pattern: both
//! searches visit coalitions in increasing bit order and accept only strict
//! improvements.

use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::span::Span;
use crate::coalition::Coalition;
use crate::game::{IntegerRule, VotingGame};
use crate::rational::{self, Rational};

/// Largest quota handled by the single-rule knapsack table.
const KNAPSACK_QUOTA_LIMIT: u64 = 1 << 20;

pub(crate) trait Cost:
    Clone + Ord + Zero + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + From<u64>
{
}

impl<T> Cost for T where
    T: Clone + Ord + Zero + Add<Output = T> + Sub<Output = T> + Mul<Output = T> + From<u64>
{
}

/// The coalition maximizing `v(S) - x(S) - eps` when that is positive.
/// Requires `x >= 0`.
pub(crate) fn most_violated(game: &VotingGame, span: &Span, x: &[Rational], eps: &Rational) -> Option<Coalition> {
    let all: Vec<Rational> = x.iter().chain([eps]).cloned().collect();
    let (ints, den) = rational::scale_to_integers(&all);
    let max_weight = game
        .integer_rules()
        .iter()
        .flat_map(|r| r.weights.iter().chain([&r.quota]))
        .copied()
        .max()
        .unwrap_or(0);
    let small = |v: &BigInt| v.to_i128().is_some_and(|v| v.abs() < 1 << 62);
    if max_weight < 1 << 56 && small(&den) && ints.iter().all(small) {
        let to = |v: &BigInt| v.to_i128().expect("checked above");
        search::<i128>(game, span, ints.iter().map(to).collect(), to(&den))
    } else {
        search::<BigInt>(game, span, ints, den)
    }
}

fn search<T: Cost>(game: &VotingGame, span: &Span, mut ints: Vec<T>, den: T) -> Option<Coalition> {
    let e = ints.pop().expect("eps component");
    let costs = ints;
    debug_assert!(costs.iter().all(|c| *c >= T::zero()), "separation needs x >= 0");
    let rules = game.integer_rules();
    let win_limit = den - e.clone();
    let lose_limit = T::zero() - e;
    let win = if win_limit > T::zero() {
        min_winning(&costs, rules, span, win_limit.clone()).map(|(c, s)| (win_limit - c, s))
    } else {
        None
    };
    let lose = if lose_limit > T::zero() {
        min_losing(&costs, rules, span, lose_limit.clone()).map(|(c, s)| (lose_limit - c, s))
    } else {
        None
    };
    match (win, lose) {
        (Some((vw, sw)), Some((vl, sl))) => Some(if vw > vl || (vw == vl && sw < sl) { sw } else { sl }),
        (w, l) => w.or(l).map(|(_, s)| s),
    }
}

fn wins(rules: &[IntegerRule], sums: &[u64]) -> bool {
    rules.iter().zip(sums).all(|(r, &s)| s >= r.quota)
}

/// Cheapest winning coalition outside `span` with cost below `limit`.
pub(crate) fn min_winning<T: Cost>(
    costs: &[T],
    rules: &[IntegerRule],
    span: &Span,
    limit: T,
) -> Option<(T, Coalition)> {
    if let [rule] = rules {
        // the knapsack only excludes the grand coalition
        let only_grand = span.rank() == 1 && span.contains(Coalition::grand(costs.len()));
        if only_grand && rule.quota <= KNAPSACK_QUOTA_LIMIT {
            return knapsack(costs, rule, limit);
        }
    }
    let n = costs.len();
    // players by cost per unit of weight, per rule
    let order: Vec<Vec<usize>> = rules
        .iter()
        .map(|r| {
            let mut o: Vec<usize> = (0..n).filter(|&i| r.weights[i] > 0).collect();
            o.sort_by(|&a, &b| {
                let lhs = costs[a].clone() * T::from(r.weights[b]);
                let rhs = costs[b].clone() * T::from(r.weights[a]);
                lhs.cmp(&rhs).then(a.cmp(&b))
            });
            o
        })
        .collect();
    // below[r][k]: weight of players 0..k under rule r
    let below: Vec<Vec<u64>> = rules
        .iter()
        .map(|r| {
            let mut p = vec![0u64; n + 1];
            for i in 0..n {
                p[i + 1] = p[i] + r.weights[i];
            }
            p
        })
        .collect();
    let mut bb = WinSearch {
        costs,
        rules,
        order,
        below,
        span,
        best: limit,
        found: None,
        sums: vec![0; rules.len()],
    };
    bb.descend(n, 0, T::zero());
    bb.found.map(|s| (bb.best, s))
}

struct WinSearch<'a, T> {
    costs: &'a [T],
    rules: &'a [IntegerRule],
    order: Vec<Vec<usize>>,
    below: Vec<Vec<u64>>,
    span: &'a Span,
    best: T,
    found: Option<Coalition>,
    sums: Vec<u64>,
}

impl<T: Cost> WinSearch<'_, T> {
    /// Players `0..k` are undecided; higher players are fixed by `mask`.
    fn descend(&mut self, k: usize, mask: u64, cost: T) {
        if cost >= self.best {
            return;
        }
        if wins(self.rules, &self.sums) {
            let s = Coalition::from_bits(mask);
            if !self.span.contains(s) {
                self.best = cost;
                self.found = Some(s);
                return;
            }
        } else if self.bound_exceeds(k, &cost) {
            return;
        }
        if k == 0 {
            return;
        }
        let i = k - 1;
        self.descend(i, mask, cost.clone());
        for (s, r) in self.sums.iter_mut().zip(self.rules) {
            *s += r.weights[i];
        }
        self.descend(i, mask | 1 << i, cost + self.costs[i].clone());
        for (s, r) in self.sums.iter_mut().zip(self.rules) {
            *s -= r.weights[i];
        }
    }

    /// Whether some rule cannot be met from players `0..k` for less than `best`.
    fn bound_exceeds(&self, k: usize, cost: &T) -> bool {
        for (r, rule) in self.rules.iter().enumerate() {
            let have = self.sums[r];
            if have >= rule.quota {
                continue;
            }
            let need = rule.quota - have;
            if self.below[r][k] < need {
                return true;
            }
            // fractional knapsack over the undecided players
            let mut acc_w = 0u64;
            let mut acc_c = cost.clone();
            for &i in self.order[r].iter().filter(|&&i| i < k) {
                let w = rule.weights[i];
                if acc_w + w >= need {
                    let rest = need - acc_w;
                    let lhs = acc_c * T::from(w) + self.costs[i].clone() * T::from(rest);
                    if lhs >= self.best.clone() * T::from(w) {
                        return true;
                    }
                    break;
                }
                acc_w += w;
                acc_c = acc_c + self.costs[i].clone();
            }
        }
        false
    }
}

/// Cheapest winning proper coalition of a single rule: knapsack over
/// `(weight capped at q, some player left out)`.
fn knapsack<T: Cost>(costs: &[T], rule: &IntegerRule, limit: T) -> Option<(T, Coalition)> {
    let q = rule.quota as usize;
    let better = |a: &(T, u64), b: &Option<(T, u64)>| match b {
        None => true,
        Some((c, m)) => a.0 < *c || (a.0 == *c && a.1 < *m),
    };
    // table[w * 2 + excluded]
    let mut table: Vec<Option<(T, u64)>> = vec![None; (q + 1) * 2];
    table[0] = Some((T::zero(), 0));
    for (i, c) in costs.iter().enumerate() {
        let w = rule.weights[i] as usize;
        let mut next: Vec<Option<(T, u64)>> = vec![None; (q + 1) * 2];
        for s in 0..=q {
            for f in 0..2 {
                let Some((cost, mask)) = &table[s * 2 + f] else {
                    continue;
                };
                let skip = (cost.clone(), *mask);
                if better(&skip, &next[s * 2 + 1]) {
                    next[s * 2 + 1] = Some(skip);
                }
                let t = (s + w).min(q);
                let take = (cost.clone() + c.clone(), mask | 1 << i);
                if better(&take, &next[t * 2 + f]) {
                    next[t * 2 + f] = Some(take);
                }
            }
        }
        table = next;
    }
    table[q * 2 + 1]
        .take()
        .filter(|(c, _)| *c < limit)
        .map(|(c, m)| (c, Coalition::from_bits(m)))
}

/// Cheapest nonempty losing coalition outside `span` with cost below `limit`.
pub(crate) fn min_losing<T: Cost>(
    costs: &[T],
    rules: &[IntegerRule],
    span: &Span,
    limit: T,
) -> Option<(T, Coalition)> {
    let mut search = LoseSearch {
        costs,
        rules,
        span,
        best: limit,
        found: None,
        sums: vec![0; rules.len()],
    };
    search.descend(costs.len(), 0, T::zero());
    search.found.map(|s| (search.best, s))
}

struct LoseSearch<'a, T> {
    costs: &'a [T],
    rules: &'a [IntegerRule],
    span: &'a Span,
    best: T,
    found: Option<Coalition>,
    sums: Vec<u64>,
}

impl<T: Cost> LoseSearch<'_, T> {
    fn descend(&mut self, k: usize, mask: u64, cost: T) {
        if cost >= self.best {
            return;
        }
        if mask != 0 {
            // supersets of a winning coalition win
            if wins(self.rules, &self.sums) {
                return;
            }
            let s = Coalition::from_bits(mask);
            if !self.span.contains(s) {
                self.best = cost;
                self.found = Some(s);
                return;
            }
        }
        if k == 0 {
            return;
        }
        let i = k - 1;
        self.descend(i, mask, cost.clone());
        for (s, r) in self.sums.iter_mut().zip(self.rules) {
            *s += r.weights[i];
        }
        self.descend(i, mask | 1 << i, cost + self.costs[i].clone());
        for (s, r) in self.sums.iter_mut().zip(self.rules) {
            *s -= r.weights[i];
        }
    }
}
