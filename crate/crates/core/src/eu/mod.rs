//! Council of Ministers voting configurations, 1958-2012.

mod panel;
mod reference;
mod table;

use std::path::{Path, PathBuf};

use crate::error::{GameError, Result};
use crate::game::VotingGame;
use crate::io::{GameFile, Period};

pub use panel::{build_power_panel, write_panel_csv, PanelRow, PANEL_YEARS};
pub use reference::{
    compare_to_reference, load_allowlist, load_reference, AllowEntry, CellCheck, CellStatus, DiscrepancyReport,
    ReferenceRow, ReferenceTable,
};
pub use table::{period_power_table, period_power_tables, PowerTable};

/// Environment variable overriding the shipped data directory.
pub const DATA_ENV: &str = "POWERKIT_DATA";

/// One Council configuration: the game in force over a range of years.
#[derive(Clone, Debug)]
pub struct CouncilConfig {
    pub file: PathBuf,
    pub period: Period,
    pub members: Vec<String>,
    pub game: VotingGame,
    pub source_note: String,
}

impl CouncilConfig {
    /// `"1958-1972"`, or `"2003"` for a single year.
    pub fn period_label(&self) -> String {
        period_label(self.period)
    }

    pub fn covers(&self, year: u32) -> bool {
        (self.period.start..=self.period.end).contains(&year)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let file = GameFile::read(path)?;
        let period = file
            .period
            .ok_or_else(|| GameError::file(path, "missing period"))?;
        if period.start > period.end {
            return Err(GameError::file(path, "period ends before it starts"));
        }
        let game = file.to_game().map_err(|e| GameError::file(path, e))?;
        Ok(CouncilConfig {
            file: path.to_path_buf(),
            period,
            members: file.members,
            game,
            source_note: file.source_note.unwrap_or_default(),
        })
    }
}

pub fn period_label(p: Period) -> String {
    if p.start == p.end {
        p.start.to_string()
    } else {
        format!("{}-{}", p.start, p.end)
    }
}

/// Every `*.json` file in `dir`, sorted by period. Overlapping periods are
/// rejected.
pub fn load_council_configs(dir: &Path) -> Result<Vec<CouncilConfig>> {
    let entries = std::fs::read_dir(dir).map_err(|e| GameError::file(dir, e))?;
    let mut paths = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| GameError::file(dir, e))?.path();
        if path.is_file() && path.extension().is_some_and(|e| e == "json") {
            paths.push(path);
        }
    }
    paths.sort();
    let mut configs = paths.iter().map(|p| CouncilConfig::from_file(p)).collect::<Result<Vec<_>>>()?;
    configs.sort_by_key(|c| (c.period.start, c.period.end));
    for pair in configs.windows(2) {
        if pair[1].period.start <= pair[0].period.end {
            return Err(GameError::file(
                &pair[1].file,
                format!(
                    "period {} overlaps {} from {}",
                    pair[1].period_label(),
                    pair[0].period_label(),
                    pair[0].file.display()
                ),
            ));
        }
    }
    Ok(configs)
}

/// The data directory: `$POWERKIT_DATA` if set, else the `data/` directory
/// shipped with the workspace.
pub fn shipped_data_dir() -> PathBuf {
    match std::env::var_os(DATA_ENV) {
        Some(dir) => PathBuf::from(dir),
        None => Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write(dir: &Path, name: &str, body: &str) {
        std::fs::write(dir.join(name), body).unwrap();
    }

    #[test]
    fn shipped_configs_load_in_order() {
        let configs = load_council_configs(&shipped_data_dir()).unwrap();
        let starts: Vec<u32> = configs.iter().map(|c| c.period.start).collect();
        assert_eq!(starts, [1958, 1973, 1981, 1986, 1995, 2003, 2004, 2007]);
        let sizes: Vec<usize> = configs.iter().map(|c| c.game.n()).collect();
        assert_eq!(sizes, [6, 9, 10, 12, 15, 15, 25, 27]);
        assert_eq!(configs.last().unwrap().period.end, 2012);
        for pair in configs.windows(2) {
            assert_eq!(pair[1].period.start, pair[0].period.end + 1);
        }
    }

    #[test]
    fn empty_directory_gives_no_configs() {
        let dir = tempfile::tempdir().unwrap();
        assert!(load_council_configs(dir.path()).unwrap().is_empty());
    }

    #[test]
    fn bad_files_are_named() {
        let dir = tempfile::tempdir().unwrap();
        write(
            dir.path(),
            "void.json",
            r#"{"name": "v", "period": {"start": 1, "end": 2}, "members": ["a", "b"],
               "rules": [{"weights": [1, 1], "quota": 3}]}"#,
        );
        let err = load_council_configs(dir.path()).unwrap_err().to_string();
        assert!(err.contains("void.json") && err.contains("void game"), "{err}");
    }

    #[test]
    fn overlapping_periods_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let body = |s: u32, e: u32| {
            format!(
                r#"{{"name": "g", "period": {{"start": {s}, "end": {e}}}, "members": ["a", "b"],
                   "rules": [{{"weights": [1, 1], "quota": 2}}]}}"#
            )
        };
        write(dir.path(), "a.json", &body(1990, 1995));
        write(dir.path(), "b.json", &body(1995, 1999));
        let err = load_council_configs(dir.path()).unwrap_err().to_string();
        assert!(err.contains("b.json") && err.contains("overlaps"), "{err}");
    }
}
