//! Power indices of simple voting games.
//!
//! All indices are normalized to sum to one and computed in exact rationals:
//!
//! * Shapley-Shubik: `phi_i = sum over S with i critical of (|S|-1)!(n-|S|)!/n!`.
//! * Banzhaf: swing counts `eta_i`, divided by their total.
//! * Johnston: each winning coalition with `k >= 1` critical players credits
//!   `1/k` to each of them; credits are normalized.
//! * Deegan-Packel: each minimal winning coalition `S` credits `1/|S|` to each
//!   member; credits are divided by the number of minimal winning coalitions.
//! * Public Good (Holler): number of minimal winning coalitions containing `i`,
//!   divided by the total over players.
//!
//! Shapley-Shubik and Banzhaf have a subset-sum counting path for single-rule
//! games; everything else sweeps all `2^n` coalitions (`n <= 30`).

mod dp;
mod swings;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub use dp::DP_CELL_LIMIT;
pub use swings::SwingCounts;

use crate::coalition::Coalition;
use crate::error::{GameError, Result};
use crate::exec::Execution;
use crate::game::VotingGame;
use crate::rational::{self, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IndexKind {
    ShapleyShubik,
    Banzhaf,
    Johnston,
    DeeganPackel,
    PublicGood,
    Nucleolus,
}

impl IndexKind {
    pub const ALL: [IndexKind; 6] = [
        IndexKind::ShapleyShubik,
        IndexKind::Banzhaf,
        IndexKind::Johnston,
        IndexKind::DeeganPackel,
        IndexKind::PublicGood,
        IndexKind::Nucleolus,
    ];

    pub fn short_name(self) -> &'static str {
        match self {
            IndexKind::ShapleyShubik => "ssi",
            IndexKind::Banzhaf => "banzhaf",
            IndexKind::Johnston => "johnston",
            IndexKind::DeeganPackel => "deegan-packel",
            IndexKind::PublicGood => "public-good",
            IndexKind::Nucleolus => "nucleolus",
        }
    }

    /// Column heading used in reports.
    pub fn heading(self) -> &'static str {
        match self {
            IndexKind::ShapleyShubik => "SSI",
            IndexKind::Banzhaf => "Banzhaf",
            IndexKind::Johnston => "Johnston",
            IndexKind::DeeganPackel => "DeeganPackel",
            IndexKind::PublicGood => "PublicGood",
            IndexKind::Nucleolus => "Nucl",
        }
    }
}

impl fmt::Display for IndexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for IndexKind {
    type Err = GameError;

    fn from_str(s: &str) -> Result<Self> {
        let k = s.trim().to_ascii_lowercase().replace('_', "-");
        Ok(match k.as_str() {
            "ssi" | "shapley-shubik" | "shapley" => IndexKind::ShapleyShubik,
            "banzhaf" | "bz" => IndexKind::Banzhaf,
            "johnston" => IndexKind::Johnston,
            "deegan-packel" | "deeganpackel" | "dp" => IndexKind::DeeganPackel,
            "public-good" | "publicgood" | "pgi" | "holler" => IndexKind::PublicGood,
            "nucleolus" | "nucl" => IndexKind::Nucleolus,
            _ => {
                return Err(GameError::Config(format!("unknown index {s:?}")));
            }
        })
    }
}

/// A normalized power distribution: nonnegative rationals summing to one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerProfile {
    pub kind: IndexKind,
    pub values: Vec<Rational>,
}

impl PowerProfile {
    pub fn new(kind: IndexKind, values: Vec<Rational>) -> Result<Self> {
        if values.iter().any(Signed::is_negative) || !rational::sum(&values).is_one() {
            return Err(GameError::Config(format!(
                "{kind} values do not form a distribution: {values:?}"
            )));
        }
        Ok(PowerProfile { kind, values })
    }

    fn normalized(kind: IndexKind, raw: Vec<Rational>) -> Self {
        let total = rational::sum(&raw);
        assert!(total.is_positive(), "{kind}: no player carries any power");
        PowerProfile {
            kind,
            values: raw.into_iter().map(|v| v / &total).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn total(&self) -> Rational {
        rational::sum(&self.values)
    }

    /// Sum of the members' values: the coalition's share of the budget.
    pub fn coalition_value(&self, s: Coalition) -> Rational {
        s.members()
            .map(|i| &self.values[i])
            .fold(Rational::zero(), |a, b| a + b)
    }

    pub fn as_f64(&self) -> Vec<f64> {
        self.values.iter().map(rational::to_f64).collect()
    }
}

fn factorials(n: usize) -> Vec<BigInt> {
    let mut f = vec![BigInt::one(); n + 1];
    for k in 1..=n {
        f[k] = &f[k - 1] * k;
    }
    f
}

fn dp_rule(game: &VotingGame) -> Option<&crate::game::IntegerRule> {
    match game.integer_rules() {
        [rule] if dp::applicable(rule) => Some(rule),
        _ => None,
    }
}

/// Shapley-Shubik index, by subset-sum counting when the game is a single
/// rule of moderate total weight, otherwise by full enumeration.
pub fn shapley_shubik(game: &VotingGame) -> Result<PowerProfile> {
    if dp_rule(game).is_some() {
        shapley_shubik_dp(game)
    } else {
        shapley_shubik_enumerated(game, Execution::default())
    }
}

/// Shapley-Shubik index from a sweep over all coalitions.
pub fn shapley_shubik_enumerated(game: &VotingGame, exec: Execution) -> Result<PowerProfile> {
    game.check_enumerable("Shapley-Shubik enumeration")?;
    let counts = SwingCounts::enumerate(game, exec);
    Ok(ssi_from_counts(&counts))
}

pub fn ssi_from_counts(counts: &SwingCounts) -> PowerProfile {
    let n = counts.n;
    let f = factorials(n);
    let nf = Rational::from_integer(f[n].clone());
    let values = counts
        .critical
        .iter()
        .map(|row| {
            let num = (1..=n)
                .map(|s| BigInt::from(row[s]) * &f[s - 1] * &f[n - s])
                .fold(BigInt::zero(), |a, b| a + b);
            Rational::from_integer(num) / &nf
        })
        .collect();
    PowerProfile {
        kind: IndexKind::ShapleyShubik,
        values,
    }
}

/// Shapley-Shubik index of a single-rule game by subset-sum counting.
pub fn shapley_shubik_dp(game: &VotingGame) -> Result<PowerProfile> {
    let rule = dp_rule(game).ok_or_else(|| GameError::Unsupported {
        operation: "Shapley-Shubik counting path",
        reason: "needs a single rule whose integer table fits the cell limit".into(),
    })?;
    let n = game.n();
    let f = factorials(n);
    let nf = Rational::from_integer(f[n].clone());
    let values = dp::swing_table(rule)
        .into_iter()
        .map(|by_size| {
            let num = by_size
                .iter()
                .enumerate()
                .map(|(k, &c)| BigInt::from(c) * &f[k] * &f[n - 1 - k])
                .fold(BigInt::zero(), |a, b| a + b);
            Rational::from_integer(num) / &nf
        })
        .collect();
    Ok(PowerProfile {
        kind: IndexKind::ShapleyShubik,
        values,
    })
}

/// Normalized Banzhaf index.
pub fn banzhaf(game: &VotingGame) -> Result<PowerProfile> {
    if let Some(rule) = dp_rule(game) {
        let raw = dp::swing_table(rule)
            .into_iter()
            .map(|by_size| Rational::from_integer(BigInt::from(by_size.iter().sum::<u128>())))
            .collect();
        return Ok(PowerProfile::normalized(IndexKind::Banzhaf, raw));
    }
    banzhaf_enumerated(game, Execution::default())
}

pub fn banzhaf_enumerated(game: &VotingGame, exec: Execution) -> Result<PowerProfile> {
    game.check_enumerable("Banzhaf enumeration")?;
    Ok(banzhaf_from_counts(&SwingCounts::enumerate(game, exec)))
}

pub fn banzhaf_from_counts(counts: &SwingCounts) -> PowerProfile {
    let raw = (0..counts.n)
        .map(|i| Rational::from_integer(counts.swings(i).into()))
        .collect();
    PowerProfile::normalized(IndexKind::Banzhaf, raw)
}

pub fn johnston(game: &VotingGame) -> Result<PowerProfile> {
    game.check_enumerable("Johnston index")?;
    Ok(johnston_from_counts(&SwingCounts::enumerate(game, Execution::default())))
}

pub fn johnston_from_counts(counts: &SwingCounts) -> PowerProfile {
    let raw = counts
        .johnston
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| Rational::new(c.into(), (k as u64).into()))
                .fold(Rational::zero(), |a, b| a + b)
        })
        .collect();
    PowerProfile::normalized(IndexKind::Johnston, raw)
}

pub fn deegan_packel(game: &VotingGame) -> Result<PowerProfile> {
    game.check_enumerable("Deegan-Packel index")?;
    Ok(deegan_packel_from_counts(&SwingCounts::enumerate(game, Execution::default())))
}

pub fn deegan_packel_from_counts(counts: &SwingCounts) -> PowerProfile {
    let raw = counts
        .minimal
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .skip(1)
                .map(|(s, &c)| Rational::new(c.into(), (s as u64).into()))
                .fold(Rational::zero(), |a, b| a + b)
        })
        .collect();
    PowerProfile::normalized(IndexKind::DeeganPackel, raw)
}

pub fn public_good(game: &VotingGame) -> Result<PowerProfile> {
    game.check_enumerable("Public Good index")?;
    Ok(public_good_from_counts(&SwingCounts::enumerate(game, Execution::default())))
}

pub fn public_good_from_counts(counts: &SwingCounts) -> PowerProfile {
    let raw = (0..counts.n)
        .map(|i| Rational::from_integer(counts.minimal_memberships(i).into()))
        .collect();
    PowerProfile::normalized(IndexKind::PublicGood, raw)
}

/// Any index by kind; the nucleolus is delegated to the LP solver.
pub fn compute(game: &VotingGame, kind: IndexKind) -> Result<PowerProfile> {
    match kind {
        IndexKind::ShapleyShubik => shapley_shubik(game),
        IndexKind::Banzhaf => banzhaf(game),
        IndexKind::Johnston => johnston(game),
        IndexKind::DeeganPackel => deegan_packel(game),
        IndexKind::PublicGood => public_good(game),
        IndexKind::Nucleolus => crate::solution::nucleolus(game),
    }
}
