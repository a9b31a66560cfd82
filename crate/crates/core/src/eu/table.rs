use super::CouncilConfig;
use crate::error::{GameError, Result};
use crate::exec::{map_items, Execution};
use crate::indices::{self, IndexKind, PowerProfile};
use crate::rational::{format_decimal, Rational};

/// Power of every member in one period, one profile per requested index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerTable {
    pub period: String,
    pub members: Vec<String>,
    pub profiles: Vec<PowerProfile>,
}

impl PowerTable {
    pub fn profile(&self, kind: IndexKind) -> Option<&PowerProfile> {
        self.profiles.iter().find(|p| p.kind == kind)
    }

    pub fn value(&self, country: &str, kind: IndexKind) -> Option<&Rational> {
        let i = self.members.iter().position(|m| m == country)?;
        self.profile(kind).map(|p| &p.values[i])
    }

    /// Three-decimal rendering of a cell, ties to even.
    pub fn rendered(&self, country: &str, kind: IndexKind) -> Option<String> {
        self.value(country, kind).map(|v| format_decimal(v, 3))
    }
}

pub fn period_power_table(config: &CouncilConfig, kinds: &[IndexKind]) -> Result<PowerTable> {
    if kinds.is_empty() {
        return Err(GameError::Config("no index requested".into()));
    }
    let profiles = kinds
        .iter()
        .map(|&k| indices::compute(&config.game, k))
        .collect::<Result<Vec<_>>>()?;
    Ok(PowerTable {
        period: config.period_label(),
        members: config.members.clone(),
        profiles,
    })
}

/// Tables for several periods, computed concurrently under
/// [`Execution::Parallel`].
pub fn period_power_tables(configs: &[CouncilConfig], kinds: &[IndexKind], exec: Execution) -> Result<Vec<PowerTable>> {
    map_items(configs, exec, |c| period_power_table(c, kinds))
        .into_iter()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eu::{load_council_configs, shipped_data_dir};
    use crate::rational::ratio;

    #[test]
    fn table_for_1958() {
        let configs = load_council_configs(&shipped_data_dir()).unwrap();
        let t = period_power_table(&configs[0], &[IndexKind::ShapleyShubik, IndexKind::Nucleolus]).unwrap();
        assert_eq!(t.period, "1958-1972");
        assert_eq!(t.value("France", IndexKind::ShapleyShubik), Some(&ratio(7, 30)));
        assert_eq!(t.value("Belgium", IndexKind::Nucleolus), Some(&ratio(1, 8)));
        assert_eq!(t.rendered("Netherlands", IndexKind::ShapleyShubik).as_deref(), Some("0.150"));
        assert_eq!(t.rendered("Luxembourg", IndexKind::Nucleolus).as_deref(), Some("0.000"));
        assert_eq!(t.value("Spain", IndexKind::Nucleolus), None);
    }
}
