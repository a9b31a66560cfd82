//! Excesses, the least core, the nucleolus and the bargaining set.
//!
//! For a payoff `x` the excess of a coalition is `e(S, x) = v(S) - x(S)`. The
//! least core minimizes the largest excess over proper nonempty coalitions;
//! the nucleolus lexicographically minimizes the whole non-increasingly
//! sorted excess vector. Both are computed with exact rational LPs whose
//! coalition rows are generated by a separation search, so games far beyond
//! exhaustive enumeration are handled.

mod bargaining;
mod certificate;
mod oracle;
mod separation;
mod span;
mod stages;

use num_traits::{One, Signed};

pub use bargaining::{has_justified_objection, Objection, BARGAINING_LIMIT};
pub use certificate::{verify_certificate, Certificate, Verification};
pub use oracle::{nucleolus_oracle, ORACLE_LIMIT};
pub use stages::Round;

use crate::coalition::Coalition;
use crate::error::{GameError, Result};
use crate::exec::{map_reduce, Execution};
use crate::game::VotingGame;
use crate::indices::{IndexKind, PowerProfile};
use crate::rational::{self, Rational};
use stages::Stages;

/// An efficient, individually rational payoff vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Imputation(Vec<Rational>);

impl Imputation {
    pub fn new(game: &VotingGame, x: Vec<Rational>) -> Result<Self> {
        if x.len() != game.n() {
            return Err(GameError::NotAnImputation(format!(
                "payoff has {} entries for {} players",
                x.len(),
                game.n()
            )));
        }
        if !rational::sum(&x).is_one() {
            return Err(GameError::NotAnImputation(format!(
                "payoffs sum to {}",
                rational::sum(&x)
            )));
        }
        for (i, xi) in x.iter().enumerate() {
            if *xi < game.value(Coalition::singleton(i)) {
                return Err(GameError::NotAnImputation(format!(
                    "player {i} gets {xi}, below its singleton value"
                )));
            }
        }
        Ok(Imputation(x))
    }

    pub fn values(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_values(self) -> Vec<Rational> {
        self.0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExcessRecord {
    pub coalition: Coalition,
    pub excess: Rational,
}

/// `v(S) - x(S)`.
pub fn excess(game: &VotingGame, s: Coalition, x: &[Rational]) -> Rational {
    s.members().fold(game.value(s), |acc, i| acc - &x[i])
}

/// Excesses of all proper nonempty coalitions, sorted non-increasingly
/// (ties in bit order).
pub fn excess_vector(game: &VotingGame, x: &[Rational]) -> Result<Vec<ExcessRecord>> {
    const LIMIT: usize = 20;
    if game.n() > LIMIT {
        return Err(GameError::capability("excess vector", LIMIT, game.n()));
    }
    let grand = game.grand_coalition();
    let mut out: Vec<ExcessRecord> = (1..grand.bits())
        .map(Coalition::from_bits)
        .map(|s| ExcessRecord {
            coalition: s,
            excess: excess(game, s, x),
        })
        .collect();
    out.sort_by(|a, b| b.excess.cmp(&a.excess).then(a.coalition.cmp(&b.coalition)));
    Ok(out)
}

/// Largest excess over proper nonempty coalitions, by exhaustive sweep.
/// Returns the excess and the lowest coalition attaining it.
pub fn max_excess_exhaustive(game: &VotingGame, x: &[Rational], exec: Execution) -> Result<(Rational, Coalition)> {
    game.check_enumerable("exhaustive excess sweep")?;
    let n = game.n();
    let (nums, den) = rational::scale_to_integers(x);
    let nums: Vec<i128> = nums
        .iter()
        .map(|v| num_traits::ToPrimitive::to_i128(v).filter(|v| v.abs() < 1 << 90))
        .collect::<Option<_>>()
        .ok_or(GameError::Unsupported {
            operation: "exhaustive excess sweep",
            reason: "payoff numerators exceed 90 bits".into(),
        })?;
    let d = num_traits::ToPrimitive::to_i128(&den)
        .filter(|v| *v < 1 << 90)
        .ok_or(GameError::Unsupported {
            operation: "exhaustive excess sweep",
            reason: "payoff denominator exceeds 90 bits".into(),
        })?;
    let split = n.min(15);
    let table = |ws: &[i128]| {
        let mut t = vec![0i128; 1 << ws.len()];
        for m in 1..t.len() {
            t[m] = t[m & (m - 1)] + ws[m.trailing_zeros() as usize];
        }
        t
    };
    let lo = table(&nums[..split]);
    let hi = table(&nums[split..]);
    let tables = game.split_tables();
    let rules = game.integer_rules();
    let grand = game.grand_coalition().bits();
    // scaled excess and mask; larger excess first, then lower mask
    let best = map_reduce(
        1u64 << n,
        exec,
        || None::<(i128, u64)>,
        |range| {
            let mut best: Option<(i128, u64)> = None;
            for m in range {
                if m == 0 || m == grand {
                    continue;
                }
                let win = tables.iter().zip(rules).all(|(t, r)| t.sum(m) >= r.quota);
                let paid = lo[(m & ((1 << split) - 1)) as usize] + hi[(m >> split) as usize];
                let e = if win { d - paid } else { -paid };
                if best.is_none_or(|(b, bm)| e > b || (e == b && m < bm)) {
                    best = Some((e, m));
                }
            }
            best
        },
        |a, b| match (a, b) {
            (Some(a), Some(b)) => Some(if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a }),
            (a, b) => a.or(b),
        },
    );
    let (e, m) = best.ok_or(GameError::Unsupported {
        operation: "exhaustive excess sweep",
        reason: "a one-player game has no proper coalition".into(),
    })?;
    Ok((Rational::new(e.into(), d.into()), Coalition::from_bits(m)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeastCoreResult {
    pub epsilon_star: Rational,
    pub witness: Imputation,
    /// Coalitions whose rows carry a positive multiplier at the optimum. Every
    /// one has excess `epsilon_star` at every least-core point.
    pub binding: Vec<Coalition>,
    /// Whether the least core is a single point.
    pub unique: bool,
    /// Uniqueness follows from the optimal basis alone (the binding rows
    /// determine `x`); otherwise auxiliary LPs decided it.
    pub certified_by_basis: bool,
}

fn check_players(game: &VotingGame) -> Result<()> {
    if game.n() < 2 {
        return Err(GameError::Unsupported {
            operation: "least core",
            reason: "needs at least two players".into(),
        });
    }
    Ok(())
}

pub fn least_core(game: &VotingGame) -> Result<LeastCoreResult> {
    check_players(game)?;
    let mut stages = Stages::new(game)?;
    let fresh = stages.clone();
    let (round, x) = stages.round()?;
    let certified_by_basis = stages.is_determined();
    let unique = certified_by_basis || fresh.face_is_point(&round.level)?;
    Ok(LeastCoreResult {
        epsilon_star: round.level,
        witness: Imputation::new(game, x)?,
        binding: round.binding,
        unique,
        certified_by_basis,
    })
}

/// Whether some imputation gives every coalition at least its value.
pub fn core_nonempty(game: &VotingGame) -> Result<bool> {
    if game.n() == 1 {
        return Ok(true);
    }
    Ok(!least_core(game)?.epsilon_star.is_positive())
}

pub fn nucleolus(game: &VotingGame) -> Result<PowerProfile> {
    nucleolus_with_certificate(game).map(|(p, _)| p)
}

/// The nucleolus with the record of refinement rounds that produced it.
pub fn nucleolus_with_certificate(game: &VotingGame) -> Result<(PowerProfile, Certificate)> {
    if game.n() == 1 {
        let x = vec![Rational::one()];
        let cert = Certificate::new(game, x.clone(), Vec::new(), true);
        return Ok((
            PowerProfile {
                kind: IndexKind::Nucleolus,
                values: x,
            },
            cert,
        ));
    }
    let mut stages = Stages::new(game)?;
    let mut rounds = Vec::new();
    let mut first_round_determined = false;
    let x = loop {
        let (round, x) = stages.round()?;
        rounds.push(round);
        if rounds.len() == 1 {
            first_round_determined = stages.is_determined();
        }
        if stages.is_determined() {
            break x;
        }
    };
    debug_assert!(rational::sum(&x).is_one() && x.iter().all(|v| !v.is_negative()));
    let cert = Certificate::new(game, x.clone(), rounds, first_round_determined);
    Ok((
        PowerProfile {
            kind: IndexKind::Nucleolus,
            values: x,
        },
        cert,
    ))
}
