use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use num_traits::{Signed, Zero};
use serde::Deserialize;

use super::PowerTable;
use crate::error::{GameError, Result};
use crate::indices::IndexKind;
use crate::rational::{format_decimal, parse_rational, round_half_even, Rational};

/// A printed value: period label, country, index and the three-decimal figure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReferenceRow {
    pub period: String,
    pub country: String,
    pub kind: IndexKind,
    pub value: Rational,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReferenceTable {
    pub rows: Vec<ReferenceRow>,
}

#[derive(Deserialize)]
struct RawRow {
    period: String,
    country: String,
    index: String,
    value: String,
}

#[derive(Deserialize)]
struct RawAllow {
    period: String,
    country: String,
    index: String,
    note: String,
}

fn kind_of(path: &Path, text: &str) -> Result<IndexKind> {
    text.parse().map_err(|e| GameError::file(path, e))
}

/// Reads a `period,country,index,value` CSV.
pub fn load_reference(path: &Path) -> Result<ReferenceTable> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| GameError::file(path, e))?;
    let mut rows = Vec::new();
    for raw in reader.deserialize::<RawRow>() {
        let raw = raw.map_err(|e| GameError::file(path, e))?;
        let value = parse_rational(&raw.value).map_err(|e| GameError::file(path, e))?;
        if value.is_negative() || value > Rational::from_integer(1.into()) {
            return Err(GameError::file(path, format!("value {} outside [0, 1]", raw.value)));
        }
        rows.push(ReferenceRow {
            period: raw.period,
            country: raw.country,
            kind: kind_of(path, &raw.index)?,
            value,
        });
    }
    Ok(ReferenceTable { rows })
}

impl ReferenceTable {
    pub fn get(&self, period: &str, country: &str, kind: IndexKind) -> Option<&Rational> {
        self.rows
            .iter()
            .find(|r| r.period == period && r.country == country && r.kind == kind)
            .map(|r| &r.value)
    }

    /// Sum of the printed values for each `(period, index)`.
    pub fn sums(&self) -> BTreeMap<(String, IndexKind), Rational> {
        let mut out: BTreeMap<(String, IndexKind), Rational> = BTreeMap::new();
        for r in &self.rows {
            *out.entry((r.period.clone(), r.kind)).or_insert_with(Rational::zero) += &r.value;
        }
        out
    }
}

/// A cell where the printed value is known to disagree with the computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AllowEntry {
    pub period: String,
    pub country: String,
    pub kind: IndexKind,
    pub note: String,
}

/// Reads a `period,country,index,note` CSV.
pub fn load_allowlist(path: &Path) -> Result<Vec<AllowEntry>> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| GameError::file(path, e))?;
    let mut out = Vec::new();
    for raw in reader.deserialize::<RawAllow>() {
        let raw = raw.map_err(|e| GameError::file(path, e))?;
        out.push(AllowEntry {
            period: raw.period,
            country: raw.country,
            kind: kind_of(path, &raw.index)?,
            note: raw.note,
        });
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CellStatus {
    Pass,
    Fail,
    /// Outside tolerance but listed in the allowlist.
    Allowlisted,
    /// Computed but not printed.
    MissingReference,
    /// Printed but not computed.
    MissingComputed,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellCheck {
    pub period: String,
    pub country: String,
    pub kind: IndexKind,
    pub computed: Option<Rational>,
    pub reported: Option<Rational>,
    /// `|round3(computed) - reported|` when both are present.
    pub difference: Option<Rational>,
    pub status: CellStatus,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DiscrepancyReport {
    pub tolerance: Rational,
    pub cells: Vec<CellCheck>,
}

impl DiscrepancyReport {
    pub fn with_status(&self, status: CellStatus) -> impl Iterator<Item = &CellCheck> {
        self.cells.iter().filter(move |c| c.status == status)
    }

    pub fn failures(&self) -> Vec<&CellCheck> {
        self.with_status(CellStatus::Fail).collect()
    }

    /// No failures and no missing cells; allowlisted cells are fine.
    pub fn is_clean(&self) -> bool {
        self.cells
            .iter()
            .all(|c| matches!(c.status, CellStatus::Pass | CellStatus::Allowlisted))
    }

    pub fn max_difference(&self) -> Option<&Rational> {
        self.cells
            .iter()
            .filter(|c| c.status == CellStatus::Pass)
            .filter_map(|c| c.difference.as_ref())
            .max()
    }
}

impl fmt::Display for DiscrepancyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let count = |s| self.with_status(s).count();
        writeln!(
            f,
            "{} cells at tolerance {}: {} pass, {} fail, {} allowlisted, {} missing",
            self.cells.len(),
            format_decimal(&self.tolerance, 4),
            count(CellStatus::Pass),
            count(CellStatus::Fail),
            count(CellStatus::Allowlisted),
            count(CellStatus::MissingReference) + count(CellStatus::MissingComputed),
        )?;
        let show = |v: &Option<Rational>| v.as_ref().map_or("-".to_string(), |v| format_decimal(v, 4));
        for c in self.cells.iter().filter(|c| c.status != CellStatus::Pass) {
            writeln!(
                f,
                "  {:?} {} {} {}: computed {} printed {}",
                c.status,
                c.period,
                c.country,
                c.kind.short_name(),
                show(&c.computed),
                show(&c.reported),
            )?;
        }
        Ok(())
    }
}

/// Compares computed tables with printed values. A cell passes when the
/// computed value, rounded to three decimals (ties to even), is within
/// `tolerance` of the printed one. Only the periods and indices present in
/// `tables` are compared.
pub fn compare_to_reference(
    tables: &[PowerTable],
    reference: &ReferenceTable,
    tolerance: &Rational,
    allowlist: &[AllowEntry],
) -> DiscrepancyReport {
    let allowed = |period: &str, country: &str, kind: IndexKind| {
        allowlist
            .iter()
            .any(|a| a.period == period && a.country == country && a.kind == kind)
    };
    let mut cells = Vec::new();
    for table in tables {
        for profile in &table.profiles {
            for (country, computed) in table.members.iter().zip(&profile.values) {
                let reported = reference.get(&table.period, country, profile.kind).cloned();
                let (difference, status) = match &reported {
                    None => (None, CellStatus::MissingReference),
                    Some(r) => {
                        let d = (round_half_even(computed, 3) - r).abs();
                        let status = if &d <= tolerance {
                            CellStatus::Pass
                        } else if allowed(&table.period, country, profile.kind) {
                            CellStatus::Allowlisted
                        } else {
                            CellStatus::Fail
                        };
                        (Some(d), status)
                    }
                };
                cells.push(CellCheck {
                    period: table.period.clone(),
                    country: country.clone(),
                    kind: profile.kind,
                    computed: Some(computed.clone()),
                    reported,
                    difference,
                    status,
                });
            }
            for row in reference
                .rows
                .iter()
                .filter(|r| r.period == table.period && r.kind == profile.kind)
                .filter(|r| !table.members.contains(&r.country))
            {
                cells.push(CellCheck {
                    period: row.period.clone(),
                    country: row.country.clone(),
                    kind: row.kind,
                    computed: None,
                    reported: Some(row.value.clone()),
                    difference: None,
                    status: CellStatus::MissingComputed,
                });
            }
        }
    }
    DiscrepancyReport {
        tolerance: tolerance.clone(),
        cells,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::indices::PowerProfile;
    use crate::rational::ratio;

    fn table(values: Vec<Rational>) -> PowerTable {
        PowerTable {
            period: "1".into(),
            members: vec!["a".into(), "b".into()],
            profiles: vec![PowerProfile::new(IndexKind::ShapleyShubik, values).unwrap()],
        }
    }

    fn reference(a: &str, b: &str) -> ReferenceTable {
        let row = |c: &str, v: &str| ReferenceRow {
            period: "1".into(),
            country: c.into(),
            kind: IndexKind::ShapleyShubik,
            value: parse_rational(v).unwrap(),
        };
        ReferenceTable {
            rows: vec![row("a", a), row("b", b)],
        }
    }

    #[test]
    fn identical_tables_give_an_empty_report() {
        let t = table(vec![ratio(3, 4), ratio(1, 4)]);
        let r = compare_to_reference(&[t], &reference("0.750", "0.250"), &ratio(1, 2000), &[]);
        assert!(r.is_clean());
        assert!(r.failures().is_empty());
        assert_eq!(r.cells.len(), 2);
    }

    #[test]
    fn failures_and_allowlist() {
        let t = table(vec![ratio(2, 3), ratio(1, 3)]);
        let refr = reference("0.667", "0.330");
        let r = compare_to_reference(std::slice::from_ref(&t), &refr, &ratio(1, 2000), &[]);
        assert_eq!(r.failures().len(), 1);
        assert_eq!(r.failures()[0].country, "b");
        assert_eq!(r.failures()[0].difference, Some(ratio(3, 1000)));
        let allow = [AllowEntry {
            period: "1".into(),
            country: "b".into(),
            kind: IndexKind::ShapleyShubik,
            note: "misprint".into(),
        }];
        let r = compare_to_reference(&[t], &refr, &ratio(1, 2000), &allow);
        assert!(r.is_clean());
        assert_eq!(r.with_status(CellStatus::Allowlisted).count(), 1);
        assert!(r.to_string().contains("Allowlisted 1 b ssi"));
    }

    #[test]
    fn missing_keys_are_reported() {
        let t = table(vec![ratio(1, 2), ratio(1, 2)]);
        let mut refr = reference("0.500", "0.500");
        refr.rows[1].country = "c".into();
        let r = compare_to_reference(&[t], &refr, &ratio(1, 2000), &[]);
        assert_eq!(r.with_status(CellStatus::MissingReference).count(), 1);
        assert_eq!(r.with_status(CellStatus::MissingComputed).count(), 1);
        assert!(!r.is_clean());
    }
}
