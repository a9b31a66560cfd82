//! Simple voting games given as intersections of weighted majority rules.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::coalition::Coalition;
use crate::error::{GameError, Result};
use crate::exec::{map_reduce, Execution};
use crate::rational::{self, Rational};

/// Largest game for exhaustive coalition enumeration.
pub const ENUMERATION_LIMIT: usize = 30;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Player {
    pub id: usize,
    pub label: String,
}

/// A weighted rule `[q; w]`: a coalition passes when its total weight is at least `q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedRule {
    weights: Vec<Rational>,
    quota: Rational,
}

impl WeightedRule {
    pub fn new(weights: Vec<Rational>, quota: Rational) -> Result<Self> {
        if let Some((player, w)) = weights.iter().enumerate().find(|(_, w)| w.is_negative()) {
            return Err(GameError::NegativeWeight {
                player,
                weight: w.to_string(),
            });
        }
        if !quota.is_positive() {
            return Err(GameError::NonPositiveQuota(quota.to_string()));
        }
        let total = rational::sum(&weights);
        if quota > total {
            return Err(GameError::VoidGame {
                quota: quota.to_string(),
                total: total.to_string(),
            });
        }
        Ok(WeightedRule { weights, quota })
    }

    pub fn from_integers(weights: &[u64], quota: u64) -> Result<Self> {
        Self::new(
            weights.iter().map(|&w| Rational::from_integer(w.into())).collect(),
            Rational::from_integer(quota.into()),
        )
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn quota(&self) -> &Rational {
        &self.quota
    }

    pub fn total(&self) -> Rational {
        rational::sum(&self.weights)
    }

    /// Same rule with `(q, w)` multiplied by a positive factor.
    pub fn scaled(&self, factor: &Rational) -> Result<Self> {
        Self::new(
            self.weights.iter().map(|w| w * factor).collect(),
            &self.quota * factor,
        )
    }

    pub fn passes(&self, s: Coalition) -> bool {
        let w: Rational = s.members().map(|i| &self.weights[i]).fold(Rational::zero(), |a, b| a + b);
        w >= self.quota
    }
}

/// A rule over nonnegative integers, gcd-reduced, equivalent to its rational source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerRule {
    pub weights: Vec<u64>,
    pub quota: u64,
    pub total: u64,
}

impl IntegerRule {
    fn from_rule(rule: &WeightedRule) -> Result<Self> {
        let den = rational::common_denominator(rule.weights.iter().chain([&rule.quota]));
        let to_int = |v: &Rational| (v * Rational::from_integer(den.clone())).to_integer();
        let mut weights: Vec<BigInt> = rule.weights.iter().map(to_int).collect();
        let mut quota = to_int(&rule.quota);
        let g = weights.iter().fold(quota.clone(), |g, w| g.gcd(w));
        if !g.is_zero() {
            weights.iter_mut().for_each(|w| *w /= &g);
            quota /= &g;
        }
        let weights: Vec<u64> = weights
            .iter()
            .map(|w| w.to_u64().ok_or(GameError::WeightOverflow))
            .collect::<Result<_>>()?;
        let total = weights
            .iter()
            .try_fold(0u64, |acc, &w| acc.checked_add(w))
            .ok_or(GameError::WeightOverflow)?;
        let quota = quota.to_u64().ok_or(GameError::WeightOverflow)?;
        Ok(IntegerRule {
            weights,
            quota,
            total,
        })
    }

    pub fn weight(&self, s: Coalition) -> u64 {
        s.members().map(|i| self.weights[i]).sum()
    }
}

/// A simple voting game: a coalition wins iff it passes every rule.
#[derive(Clone, Debug)]
pub struct VotingGame {
    name: String,
    players: Vec<Player>,
    rules: Vec<WeightedRule>,
    integer_rules: Vec<IntegerRule>,
}

impl PartialEq for VotingGame {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.players == other.players && self.rules == other.rules
    }
}

impl VotingGame {
    pub fn new(name: impl Into<String>, labels: Vec<String>, rules: Vec<WeightedRule>) -> Result<Self> {
        let n = labels.len();
        if n == 0 || rules.is_empty() {
            return Err(GameError::Empty);
        }
        if n > 64 {
            return Err(GameError::TooManyPlayers(n));
        }
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(GameError::DuplicateLabel(l.clone()));
            }
        }
        for r in &rules {
            if r.weights.len() != n {
                return Err(GameError::WeightCount {
                    expected: n,
                    got: r.weights.len(),
                });
            }
        }
        let integer_rules = rules.iter().map(IntegerRule::from_rule).collect::<Result<_>>()?;
        let players = labels
            .into_iter()
            .enumerate()
            .map(|(id, label)| Player { id, label })
            .collect();
        Ok(VotingGame {
            name: name.into(),
            players,
            rules,
            integer_rules,
        })
    }

    /// Single weighted rule `[quota; weights]`.
    pub fn weighted(
        name: impl Into<String>,
        labels: Vec<String>,
        weights: Vec<Rational>,
        quota: Rational,
    ) -> Result<Self> {
        Self::new(name, labels, vec![WeightedRule::new(weights, quota)?])
    }

    /// Single rule with integer weights and players labelled `P0, P1, ...`.
    pub fn from_integer_weights(name: impl Into<String>, weights: &[u64], quota: u64) -> Result<Self> {
        Self::new(
            name,
            default_labels(weights.len()),
            vec![WeightedRule::from_integers(weights, quota)?],
        )
    }

    /// Player 0 decides alone.
    pub fn dictator(n: usize) -> Result<Self> {
        let mut w = vec![0; n];
        w[0] = 1;
        Self::from_integer_weights("dictator", &w, 1)
    }

    pub fn unanimity(n: usize) -> Result<Self> {
        Self::from_integer_weights("unanimity", &vec![1; n], n as u64)
    }

    /// Simple majority `[(n+1)/2; 1, ..., 1]`, rounded up.
    pub fn majority(n: usize) -> Result<Self> {
        Self::from_integer_weights("majority", &vec![1; n], (n as u64) / 2 + 1)
    }

    /// Intersection of games over the same players: a coalition wins iff it wins in all of them.
    pub fn intersect(games: &[VotingGame]) -> Result<Self> {
        let first = games.first().ok_or(GameError::Empty)?;
        if games.iter().any(|g| g.players != first.players) {
            return Err(GameError::MismatchedPlayers);
        }
        if games.len() == 1 {
            return Ok(first.clone());
        }
        let name = games.iter().map(|g| g.name.as_str()).collect::<Vec<_>>().join(" & ");
        let rules = games.iter().flat_map(|g| g.rules.iter().cloned()).collect();
        Self::new(name, first.labels(), rules)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.players.len()
    }

    pub fn players(&self) -> &[Player] {
        &self.players
    }

    pub fn labels(&self) -> Vec<String> {
        self.players.iter().map(|p| p.label.clone()).collect()
    }

    pub fn player_index(&self, label: &str) -> Option<usize> {
        self.players.iter().position(|p| p.label == label)
    }

    pub fn rules(&self) -> &[WeightedRule] {
        &self.rules
    }

    pub fn integer_rules(&self) -> &[IntegerRule] {
        &self.integer_rules
    }

    pub fn grand_coalition(&self) -> Coalition {
        Coalition::grand(self.n())
    }

    /// Same game with rule `r` scaled by `factors[r]`.
    pub fn rescaled(&self, factors: &[Rational]) -> Result<Self> {
        let rules = self
            .rules
            .iter()
            .zip(factors)
            .map(|(r, f)| r.scaled(f))
            .collect::<Result<_>>()?;
        Self::new(self.name.clone(), self.labels(), rules)
    }

    /// The coalition of the named players; unknown labels are an error.
    pub fn coalition_of(&self, labels: &[&str]) -> Result<Coalition> {
        labels
            .iter()
            .map(|l| {
                self.player_index(l)
                    .ok_or_else(|| GameError::Config(format!("unknown player {l:?}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Coalition::from_members)
    }

    pub fn is_winning(&self, s: Coalition) -> bool {
        debug_assert!(s.is_subset_of(self.grand_coalition()));
        self.integer_rules.iter().all(|r| r.weight(s) >= r.quota)
    }

    /// Coalition value v(S) of the simple game.
    pub fn value(&self, s: Coalition) -> Rational {
        Rational::from_integer(u8::from(self.is_winning(s)).into())
    }

    /// `i` is critical in `s`: `s` wins and `s \ {i}` loses.
    pub fn is_critical(&self, i: usize, s: Coalition) -> bool {
        s.contains(i) && self.is_winning(s) && !self.is_winning(s.without(i))
    }

    pub(crate) fn check_enumerable(&self, operation: &'static str) -> Result<()> {
        if self.n() > ENUMERATION_LIMIT {
            Err(GameError::capability(operation, ENUMERATION_LIMIT, self.n()))
        } else {
            Ok(())
        }
    }

    /// Winning coalitions none of whose proper subsets win, in increasing bit order.
    pub fn minimal_winning_coalitions(&self) -> Result<Vec<Coalition>> {
        self.check_enumerable("minimal winning coalition enumeration")?;
        let n = self.n();
        // suffix[r][k]: weight of players k.. under rule r
        let suffix: Vec<Vec<u64>> = self
            .integer_rules
            .iter()
            .map(|r| {
                let mut s = vec![0u64; n + 1];
                for k in (0..n).rev() {
                    s[k] = s[k + 1] + r.weights[k];
                }
                s
            })
            .collect();
        let mut out = Vec::new();
        let mut sums = vec![0u64; self.integer_rules.len()];
        self.mwc_dfs(0, Coalition::EMPTY, &mut sums, &suffix, &mut out);
        out.sort();
        Ok(out)
    }

    fn mwc_dfs(
        &self,
        k: usize,
        current: Coalition,
        sums: &mut Vec<u64>,
        suffix: &[Vec<u64>],
        out: &mut Vec<Coalition>,
    ) {
        let rules = &self.integer_rules;
        if rules.iter().zip(sums.iter()).all(|(r, &s)| s >= r.quota) {
            // supersets of a winning set are never minimal
            if current.members().all(|i| !self.is_winning(current.without(i))) {
                out.push(current);
            }
            return;
        }
        if k == self.n() {
            return;
        }
        if rules
            .iter()
            .zip(sums.iter())
            .enumerate()
            .any(|(r, (rule, &s))| s + suffix[r][k] < rule.quota)
        {
            return;
        }
        for (r, s) in sums.iter_mut().enumerate() {
            *s += rules[r].weights[k];
        }
        self.mwc_dfs(k + 1, current.with(k), sums, suffix, out);
        for (r, s) in sums.iter_mut().enumerate() {
            *s -= rules[r].weights[k];
        }
        self.mwc_dfs(k + 1, current, sums, suffix, out);
    }

    /// Players contained in every winning coalition.
    pub fn vetoers(&self) -> Vec<usize> {
        let grand = self.grand_coalition();
        (0..self.n())
            .filter(|&i| !self.is_winning(grand.without(i)))
            .collect()
    }

    /// Players critical in no winning coalition.
    ///
    /// Single-rule games use a subset-sum reachability table and work for any
    /// size; other games are enumerated exhaustively.
    pub fn dummies(&self) -> Result<Vec<usize>> {
        if let [rule] = self.integer_rules.as_slice() {
            if let Some(d) = single_rule_dummies(rule) {
                return Ok(d);
            }
        }
        self.check_enumerable("dummy detection")?;
        let swings = crate::indices::SwingCounts::enumerate(self, Execution::default());
        Ok((0..self.n()).filter(|&i| swings.swings(i) == 0).collect())
    }

    /// `weights` and coalition sums split into low/high lookup tables for fast sweeps.
    pub(crate) fn split_tables(&self) -> Vec<SplitSums> {
        self.integer_rules.iter().map(|r| SplitSums::new(&r.weights)).collect()
    }

    /// Exhaustively checks that supersets of winning coalitions win.
    pub fn is_monotone_exhaustive(&self) -> Result<bool> {
        self.check_enumerable("monotonicity check")?;
        let n = self.n();
        let tables = self.split_tables();
        let win = |m: u64| {
            tables
                .iter()
                .zip(&self.integer_rules)
                .all(|(t, r)| t.sum(m) >= r.quota)
        };
        let bad = map_reduce(
            1u64 << n,
            Execution::default(),
            || false,
            |range| {
                range.into_iter().any(|m| {
                    win(m) && (0..n).any(|i| m >> i & 1 == 0 && !win(m | 1 << i))
                })
            },
            |a, b| a || b,
        );
        Ok(!bad)
    }
}

pub(crate) fn default_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("P{i}")).collect()
}

const REACHABILITY_LIMIT: u64 = 1 << 26;

fn single_rule_dummies(rule: &IntegerRule) -> Option<Vec<usize>> {
    if rule.quota > REACHABILITY_LIMIT {
        return None;
    }
    let q = rule.quota as usize;
    let n = rule.weights.len();
    // reachable[w] for w < q, built without player i for each i in turn
    let mut dummies = Vec::new();
    for i in 0..n {
        let wi = rule.weights[i] as usize;
        if wi == 0 {
            dummies.push(i);
            continue;
        }
        let mut reach = vec![false; q];
        reach[0] = true;
        for (j, &w) in rule.weights.iter().enumerate() {
            let w = w as usize;
            if j == i || w == 0 || w >= q {
                continue;
            }
            for s in (w..q).rev() {
                if reach[s - w] {
                    reach[s] = true;
                }
            }
        }
        let lo = q.saturating_sub(wi);
        if !reach[lo..q].iter().any(|&r| r) {
            dummies.push(i);
        }
    }
    Some(dummies)
}

/// Coalition weight via two lookup tables indexed by the low and high bits.
pub(crate) struct SplitSums {
    lo: Vec<u64>,
    hi: Vec<u64>,
    shift: u32,
}

impl SplitSums {
    pub(crate) fn new(weights: &[u64]) -> Self {
        let n = weights.len();
        let shift = n.min(16) as u32;
        let table = |ws: &[u64]| {
            let mut t = vec![0u64; 1 << ws.len()];
            for m in 1..t.len() {
                let low = m.trailing_zeros() as usize;
                t[m] = t[m & (m - 1)] + ws[low];
            }
            t
        };
        SplitSums {
            lo: table(&weights[..shift as usize]),
            hi: table(&weights[shift as usize..]),
            shift,
        }
    }

    #[inline]
    pub(crate) fn sum(&self, m: u64) -> u64 {
        self.lo[(m & ((1 << self.shift) - 1)) as usize] + self.hi[(m >> self.shift) as usize]
    }
}
