use std::fmt::Write as _;

use num_traits::One;

use super::stages::Round;
use super::{excess, max_excess_exhaustive, Imputation};
use crate::coalition::Coalition;
use crate::error::{GameError, Result};
use crate::exec::Execution;
use crate::game::VotingGame;
use crate::rational::{parse_rational, Rational};

/// Audit record of a nucleolus computation: the payoff and, per round, the
/// excess level and the coalitions fixed at it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub game: String,
    pub labels: Vec<String>,
    pub x: Vec<Rational>,
    pub rounds: Vec<Round>,
    /// The first round's binding rows already determined `x`, so the least
    /// core is a single point.
    pub least_core_unique: bool,
}

/// Outcome of [`verify_certificate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verification {
    pub max_excess: Rational,
    pub attained_by: Coalition,
    pub coalitions_checked: u64,
}

impl Certificate {
    pub(crate) fn new(game: &VotingGame, x: Vec<Rational>, rounds: Vec<Round>, least_core_unique: bool) -> Self {
        Certificate {
            game: game.name().to_string(),
            labels: game.labels(),
            x,
            rounds,
            least_core_unique,
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "nucleolus certificate");
        let _ = writeln!(out, "game: {}", self.game);
        let _ = writeln!(out, "players: {}", self.labels.join("; "));
        let xs: Vec<String> = self.x.iter().map(ToString::to_string).collect();
        let _ = writeln!(out, "x: {}", xs.join(" "));
        let _ = writeln!(
            out,
            "least core unique by basis: {}",
            if self.least_core_unique { "yes" } else { "no" }
        );
        for (k, r) in self.rounds.iter().enumerate() {
            let _ = writeln!(out, "round {}: level {}", k + 1, r.level);
            for s in &r.binding {
                let members: Vec<String> = s.members().map(|i| i.to_string()).collect();
                let _ = writeln!(out, "  binding {{{}}}", members.join(","));
            }
            if !r.fixed_players.is_empty() {
                let ps: Vec<String> = r.fixed_players.iter().map(ToString::to_string).collect();
                let _ = writeln!(out, "  at lower bound {}", ps.join(","));
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let bad = |line: &str| GameError::Certificate(format!("cannot read line {line:?}"));
        let mut lines = text.lines().map(str::trim_end).filter(|l| !l.trim().is_empty());
        if lines.next() != Some("nucleolus certificate") {
            return Err(GameError::Certificate("missing header".into()));
        }
        let mut cert = Certificate {
            game: String::new(),
            labels: Vec::new(),
            x: Vec::new(),
            rounds: Vec::new(),
            least_core_unique: false,
        };
        for line in lines {
            if let Some(v) = line.strip_prefix("game: ") {
                cert.game = v.to_string();
            } else if let Some(v) = line.strip_prefix("players: ") {
                cert.labels = v.split("; ").map(String::from).collect();
            } else if let Some(v) = line.strip_prefix("x: ") {
                cert.x = v.split_whitespace().map(parse_rational).collect::<Result<_>>()?;
            } else if let Some(v) = line.strip_prefix("least core unique by basis: ") {
                cert.least_core_unique = v == "yes";
            } else if let Some(v) = line.strip_prefix("round ") {
                let (_, level) = v.split_once(": level ").ok_or_else(|| bad(line))?;
                cert.rounds.push(Round {
                    level: parse_rational(level)?,
                    binding: Vec::new(),
                    fixed_players: Vec::new(),
                });
            } else if let Some(v) = line.trim_start().strip_prefix("binding ") {
                let inner = v.strip_prefix('{').and_then(|v| v.strip_suffix('}')).ok_or_else(|| bad(line))?;
                let members = inner
                    .split(',')
                    .filter(|m| !m.is_empty())
                    .map(|m| m.trim().parse::<usize>().map_err(|_| bad(line)))
                    .collect::<Result<Vec<_>>>()?;
                let round = cert.rounds.last_mut().ok_or_else(|| bad(line))?;
                round.binding.push(Coalition::from_members(members));
            } else if let Some(v) = line.trim_start().strip_prefix("at lower bound ") {
                let players = v
                    .split(',')
                    .map(|m| m.trim().parse::<usize>().map_err(|_| bad(line)))
                    .collect::<Result<Vec<_>>>()?;
                let round = cert.rounds.last_mut().ok_or_else(|| bad(line))?;
                round.fixed_players = players;
            } else {
                return Err(bad(line));
            }
        }
        Ok(cert)
    }
}

/// Re-checks a certificate against the game by sweeping every coalition,
/// without using the solver: `x` is an imputation, no proper coalition has
/// excess above the first level, every recorded coalition sits exactly at its
/// round's level, and levels never increase.
pub fn verify_certificate(game: &VotingGame, cert: &Certificate) -> Result<Verification> {
    let fail = |m: String| Err(GameError::Certificate(m));
    if cert.labels != game.labels() {
        return fail("player list differs from the game".into());
    }
    let x = Imputation::new(game, cert.x.clone())?.into_values();
    if game.n() == 1 {
        return Ok(Verification {
            max_excess: Rational::one() - &x[0],
            attained_by: game.grand_coalition(),
            coalitions_checked: 0,
        });
    }
    let Some(first) = cert.rounds.first() else {
        return fail("no rounds recorded".into());
    };
    let (max_excess, attained_by) = max_excess_exhaustive(game, &x, Execution::default())?;
    if max_excess > first.level {
        return fail(format!(
            "coalition {attained_by:?} has excess {max_excess} above the first level {}",
            first.level
        ));
    }
    for (k, round) in cert.rounds.iter().enumerate() {
        if k > 0 && round.level > cert.rounds[k - 1].level {
            return fail(format!("level rises in round {}", k + 1));
        }
        for &s in &round.binding {
            if s.is_empty() || s == game.grand_coalition() || !s.is_subset_of(game.grand_coalition()) {
                return fail(format!("round {}: {s:?} is not a proper coalition", k + 1));
            }
            let e = excess(game, s, &x);
            if e != round.level {
                return fail(format!(
                    "round {}: {s:?} has excess {e}, recorded level {}",
                    k + 1,
                    round.level
                ));
            }
        }
        for &i in &round.fixed_players {
            if i >= game.n() || x[i] != game.value(Coalition::singleton(i)) {
                return fail(format!("round {}: player {i} is not at its lower bound", k + 1));
            }
        }
    }
    Ok(Verification {
        max_excess,
        attained_by,
        coalitions_checked: (1u64 << game.n()) - 2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solution::nucleolus_with_certificate;

    #[test]
    fn render_parse_round_trip_and_verify() {
        let g = VotingGame::from_integer_weights("eec", &[4, 4, 4, 2, 2, 1], 12).unwrap();
        let (_, cert) = nucleolus_with_certificate(&g).unwrap();
        let text = cert.render();
        let back = Certificate::parse(&text).unwrap();
        assert_eq!(back, cert);
        let v = verify_certificate(&g, &back).unwrap();
        assert_eq!(v.max_excess, cert.rounds[0].level);
        assert_eq!(v.coalitions_checked, 62);
    }

    #[test]
    fn tampered_certificate_is_rejected() {
        let g = VotingGame::from_integer_weights("eec", &[4, 4, 4, 2, 2, 1], 12).unwrap();
        let (_, mut cert) = nucleolus_with_certificate(&g).unwrap();
        cert.rounds[0].level = crate::rational::ratio(1, 5);
        assert!(matches!(verify_certificate(&g, &cert), Err(GameError::Certificate(_))));
        let (_, mut cert) = nucleolus_with_certificate(&g).unwrap();
        cert.x.swap(0, 3);
        assert!(verify_certificate(&g, &cert).is_err());
    }
}
