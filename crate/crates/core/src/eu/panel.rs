use std::ops::RangeInclusive;
use std::path::Path;

use super::{CouncilConfig, PowerTable};
use crate::error::{GameError, Result};
use crate::indices::IndexKind;
use crate::rational::{format_decimal, Rational};

/// Years covered by the budget panel.
pub const PANEL_YEARS: RangeInclusive<u32> = 1976..=2012;

/// Power of one member state in one year.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PanelRow {
    pub country: String,
    pub year: u32,
    pub p_ssi: Rational,
    pub p_nucl: Rational,
}

/// One row per member and year. `tables[k]` must hold the SSI and nucleolus
/// for `configs[k]`. Rows are ordered by year, then by member order.
pub fn build_power_panel(
    configs: &[CouncilConfig],
    tables: &[PowerTable],
    years: RangeInclusive<u32>,
) -> Result<Vec<PanelRow>> {
    if configs.len() != tables.len() {
        return Err(GameError::Config("one power table per configuration is required".into()));
    }
    let mut rows = Vec::new();
    for year in years {
        let covering: Vec<usize> = (0..configs.len()).filter(|&k| configs[k].covers(year)).collect();
        let k = match covering[..] {
            [k] => k,
            [] => return Err(GameError::Config(format!("no configuration covers {year}"))),
            _ => return Err(GameError::Config(format!("several configurations cover {year}"))),
        };
        let table = &tables[k];
        let column = |kind| {
            table
                .profile(kind)
                .ok_or_else(|| GameError::Config(format!("table {} lacks {kind}", table.period)))
        };
        let (ssi, nucl) = (column(IndexKind::ShapleyShubik)?, column(IndexKind::Nucleolus)?);
        for (i, country) in table.members.iter().enumerate() {
            rows.push(PanelRow {
                country: country.clone(),
                year,
                p_ssi: ssi.values[i].clone(),
                p_nucl: nucl.values[i].clone(),
            });
        }
    }
    Ok(rows)
}

/// Writes `country,year,p_ssi,p_nucl` with `places` decimals.
pub fn write_panel_csv(rows: &[PanelRow], path: &Path, places: u32) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| GameError::file(path, e))?;
    w.write_record(["country", "year", "p_ssi", "p_nucl"])?;
    for r in rows {
        w.write_record([
            r.country.clone(),
            r.year.to_string(),
            format_decimal(&r.p_ssi, places),
            format_decimal(&r.p_nucl, places),
        ])?;
    }
    w.flush()?;
    Ok(())
}
