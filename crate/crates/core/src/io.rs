//! JSON game files.
//!
//! ```json
//! {
//!   "name": "EEC Council 1958-1972",
//!   "members": ["Germany", "Italy", "France", "Belgium", "Netherlands", "Luxembourg"],
//!   "rules": [{ "weights": [4, 4, 4, 2, 2, 1], "quota": 12 }]
//! }
//! ```
//!
//! Weights and quotas are JSON numbers or `"p/q"` strings and are read
//! exactly. Bit 0 of a coalition is the first member listed. Council files
//! also carry `period`, `population` and `source_note`; a population block
//! `{values, threshold}` adds the rule "population at least `threshold` of
//! the total".

use std::fs;
use std::path::Path;

use num_traits::One;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{GameError, Result};
use crate::game::{VotingGame, WeightedRule};
use crate::rational::{self, parse_rational, Rational};

/// An exact number in a game file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Exact(pub Rational);

impl<'de> Deserialize<'de> for Exact {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = match serde_json::Value::deserialize(d)? {
            serde_json::Value::Number(n) => n.to_string(),
            serde_json::Value::String(s) => s,
            other => return Err(serde::de::Error::custom(format!("expected a number, got {other}"))),
        };
        parse_rational(&text).map(Exact).map_err(serde::de::Error::custom)
    }
}

impl Serialize for Exact {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.denom().is_one() {
            if let Ok(v) = i64::try_from(self.0.numer()) {
                return s.serialize_i64(v);
            }
        }
        s.serialize_str(&self.0.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleSpec {
    pub weights: Vec<Exact>,
    pub quota: Exact,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Period {
    pub start: u32,
    pub end: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PopulationSpec {
    pub values: Vec<Exact>,
    /// Required share of the total population.
    pub threshold: Exact,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameFile {
    pub name: String,
    pub members: Vec<String>,
    pub rules: Vec<RuleSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub period: Option<Period>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub population: Option<PopulationSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source_note: Option<String>,
}

impl GameFile {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| GameError::file(path, e))?;
        Self::parse(&text).map_err(|e| GameError::file(path, e))
    }

    /// All rules, the population rule last.
    pub fn weighted_rules(&self) -> Result<Vec<WeightedRule>> {
        let mut rules = self
            .rules
            .iter()
            .map(|r| WeightedRule::new(r.weights.iter().map(|w| w.0.clone()).collect(), r.quota.0.clone()))
            .collect::<Result<Vec<_>>>()?;
        if let Some(p) = &self.population {
            let values: Vec<Rational> = p.values.iter().map(|v| v.0.clone()).collect();
            let quota = rational::sum(&values) * &p.threshold.0;
            rules.push(WeightedRule::new(values, quota)?);
        }
        Ok(rules)
    }

    pub fn to_game(&self) -> Result<VotingGame> {
        VotingGame::new(self.name.clone(), self.members.clone(), self.weighted_rules()?)
    }

    pub fn from_game(game: &VotingGame) -> Self {
        GameFile {
            name: game.name().to_string(),
            members: game.labels(),
            rules: game
                .rules()
                .iter()
                .map(|r| RuleSpec {
                    weights: r.weights().iter().cloned().map(Exact).collect(),
                    quota: Exact(r.quota().clone()),
                })
                .collect(),
            period: None,
            population: None,
            source_note: None,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Reads a game file; errors name the file.
pub fn read_game(path: &Path) -> Result<VotingGame> {
    GameFile::read(path)?.to_game().map_err(|e| GameError::file(path, e))
}

pub fn write_game(game: &VotingGame, path: &Path) -> Result<()> {
    fs::write(path, GameFile::from_game(game).to_json()? + "\n").map_err(|e| GameError::file(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn reads_numbers_and_fraction_strings() {
        let text = r#"{"name": "g", "members": ["a", "b", "c"],
            "rules": [{"weights": [0.5, "1/3", 2], "quota": "7/3"}]}"#;
        let g = GameFile::parse(text).unwrap().to_game().unwrap();
        assert_eq!(g.rules()[0].weights(), &[ratio(1, 2), ratio(1, 3), ratio(2, 1)]);
        assert_eq!(g.rules()[0].quota(), &ratio(7, 3));
        assert!(g.is_winning(g.coalition_of(&["b", "c"]).unwrap()));
        assert!(!g.is_winning(g.coalition_of(&["a", "b"]).unwrap()));
    }

    #[test]
    fn population_block_adds_a_rule() {
        let text = r#"{"name": "g", "members": ["a", "b", "c"],
            "rules": [{"weights": [1, 1, 1], "quota": 2}],
            "population": {"values": [60, 30, 10], "threshold": "31/50"}}"#;
        let g = GameFile::parse(text).unwrap().to_game().unwrap();
        assert_eq!(g.rules().len(), 2);
        assert_eq!(g.rules()[1].quota(), &ratio(62, 1));
        assert!(g.is_winning(g.coalition_of(&["a", "b"]).unwrap()));
        assert!(!g.is_winning(g.coalition_of(&["b", "c"]).unwrap()));
    }

    #[test]
    fn round_trip_through_disk() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.json");
        let g = VotingGame::weighted(
            "g",
            vec!["x".into(), "y".into()],
            vec![ratio(3, 2), ratio(1, 1)],
            ratio(2, 1),
        )
        .unwrap();
        write_game(&g, &path).unwrap();
        assert_eq!(read_game(&path).unwrap(), g);
    }

    #[test]
    fn errors_name_the_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("void.json");
        fs::write(&path, r#"{"name": "v", "members": ["a"], "rules": [{"weights": [1], "quota": 2}]}"#).unwrap();
        let err = read_game(&path).unwrap_err().to_string();
        assert!(err.contains("void.json"), "{err}");
        assert!(err.contains("void game"), "{err}");
    }
}
