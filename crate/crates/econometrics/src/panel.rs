//! Country-year budget panel.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{EconError, Result};

/// Membership sizes marking the enlargement dummies `EU10 .. EU27`.
pub const ENLARGEMENTS: [usize; 5] = [10, 12, 15, 25, 27];

/// Observation counts marking the unbalancedness dummies `tobs32 .. tobs6`.
/// Countries observed in every year form the base group.
pub const TOBS: [usize; 5] = [32, 27, 18, 9, 6];

/// Tolerance on per-year share sums in the source data.
pub const YEAR_SUM_TOLERANCE: f64 = 0.02;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PanelObs {
    pub country: String,
    pub year: u32,
    pub exp: f64,
    pub exp_adj: f64,
    pub p_ssi: f64,
    pub p_nucl: f64,
    pub agri: f64,
    pub income: f64,
}

/// Budget-side columns of one observation, before power is attached.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BudgetObs {
    pub country: String,
    pub year: u32,
    pub exp: f64,
    pub exp_adj: f64,
    pub agri: f64,
    pub income: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PowerObs {
    pub country: String,
    pub year: u32,
    pub p_ssi: f64,
    pub p_nucl: f64,
}

/// Keys present on only one side of a join.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct JoinReport {
    pub missing_budget: Vec<(String, u32)>,
    pub missing_power: Vec<(String, u32)>,
}

impl JoinReport {
    pub fn is_complete(&self) -> bool {
        self.missing_budget.is_empty() && self.missing_power.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PanelDataset {
    obs: Vec<PanelObs>,
    members_in_year: BTreeMap<u32, usize>,
    years_of_country: HashMap<String, usize>,
}

fn check_share(column: &'static str, o: &PanelObs, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(EconError::ShareOutOfRange {
            column,
            country: o.country.clone(),
            year: o.year,
            value,
        })
    }
}

impl PanelDataset {
    /// Validates shares and per-year sums of `exp` and `exp_adj`.
    pub fn new(obs: Vec<PanelObs>) -> Result<Self> {
        if obs.is_empty() {
            return Err(EconError::EmptyPanel);
        }
        let mut seen = BTreeSet::new();
        let mut sums: BTreeMap<u32, (f64, f64)> = BTreeMap::new();
        for o in &obs {
            if !seen.insert((o.country.as_str(), o.year)) {
                return Err(EconError::Duplicate {
                    country: o.country.clone(),
                    year: o.year,
                });
            }
            for (column, v) in [
                ("exp", o.exp),
                ("exp_adj", o.exp_adj),
                ("p_ssi", o.p_ssi),
                ("p_nucl", o.p_nucl),
                ("agri", o.agri),
            ] {
                check_share(column, o, v)?;
            }
            if !o.income.is_finite() || o.income < 0.0 {
                return Err(EconError::Specification(format!(
                    "income {} for {} {} is not a nonnegative ratio",
                    o.income, o.country, o.year
                )));
            }
            let s = sums.entry(o.year).or_default();
            s.0 += o.exp;
            s.1 += o.exp_adj;
        }
        for (&year, &(exp, adj)) in &sums {
            for (column, sum) in [("exp", exp), ("exp_adj", adj)] {
                if (sum - 1.0).abs() > YEAR_SUM_TOLERANCE {
                    return Err(EconError::YearSum {
                        column,
                        year,
                        sum,
                        tolerance: YEAR_SUM_TOLERANCE,
                    });
                }
            }
        }
        let mut members_in_year = BTreeMap::new();
        let mut years_of_country = HashMap::new();
        for o in &obs {
            *members_in_year.entry(o.year).or_insert(0) += 1;
            *years_of_country.entry(o.country.clone()).or_insert(0) += 1;
        }
        Ok(PanelDataset {
            obs,
            members_in_year,
            years_of_country,
        })
    }

    /// Attaches power to budget rows by `(country, year)`. Keys missing on
    /// either side are listed and the matched rows are kept, unvalidated.
    pub fn join(budget: &[BudgetObs], power: &[PowerObs]) -> (Vec<PanelObs>, JoinReport) {
        let by_key: HashMap<(&str, u32), &PowerObs> = power.iter().map(|p| ((p.country.as_str(), p.year), p)).collect();
        let budget_keys: BTreeSet<(&str, u32)> = budget.iter().map(|b| (b.country.as_str(), b.year)).collect();
        let mut report = JoinReport::default();
        let mut obs = Vec::new();
        for b in budget {
            match by_key.get(&(b.country.as_str(), b.year)) {
                Some(p) => obs.push(PanelObs {
                    country: b.country.clone(),
                    year: b.year,
                    exp: b.exp,
                    exp_adj: b.exp_adj,
                    p_ssi: p.p_ssi,
                    p_nucl: p.p_nucl,
                    agri: b.agri,
                    income: b.income,
                }),
                None => report.missing_power.push((b.country.clone(), b.year)),
            }
        }
        for p in power {
            if !budget_keys.contains(&(p.country.as_str(), p.year)) {
                report.missing_budget.push((p.country.clone(), p.year));
            }
        }
        (obs, report)
    }

    pub fn obs(&self) -> &[PanelObs] {
        &self.obs
    }

    pub fn len(&self) -> usize {
        self.obs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.obs.is_empty()
    }

    /// Number of distinct countries.
    pub fn countries(&self) -> usize {
        self.years_of_country.len()
    }

    /// `EU10 .. EU27` for observation `i`: one when that year's membership
    /// matches.
    pub fn enlargement_dummies(&self, i: usize) -> [f64; 5] {
        let m = self.members_in_year[&self.obs[i].year];
        ENLARGEMENTS.map(|k| f64::from(u8::from(m == k)))
    }

    /// `tobs32 .. tobs6` for observation `i`.
    pub fn tobs_dummies(&self, i: usize) -> [f64; 5] {
        let t = self.years_of_country[&self.obs[i].country];
        TOBS.map(|k| f64::from(u8::from(t == k)))
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        let mut reader = csv::Reader::from_path(path).map_err(|e| EconError::file(path, e))?;
        let obs = reader
            .deserialize()
            .collect::<std::result::Result<Vec<PanelObs>, _>>()
            .map_err(|e| EconError::file(path, e))?;
        Self::new(obs).map_err(|e| EconError::file(path, e))
    }

    /// Writes the panel with its derived dummies.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path).map_err(|e| EconError::file(path, e))?;
        let mut header: Vec<String> = ["country", "year", "exp", "exp_adj", "p_ssi", "p_nucl", "agri", "income"]
            .map(String::from)
            .to_vec();
        header.extend(ENLARGEMENTS.map(|k| format!("EU{k}")));
        header.extend(TOBS.map(|k| format!("tobs{k}")));
        w.write_record(&header)?;
        for (i, o) in self.obs.iter().enumerate() {
            let mut rec = vec![o.country.clone(), o.year.to_string()];
            rec.extend([o.exp, o.exp_adj, o.p_ssi, o.p_nucl, o.agri, o.income].map(|v| v.to_string()));
            rec.extend(self.enlargement_dummies(i).map(|v| v.to_string()));
            rec.extend(self.tobs_dummies(i).map(|v| v.to_string()));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Reads `country,year,exp,exp_adj,agri,income`.
pub fn read_budget_csv(path: &Path) -> Result<Vec<BudgetObs>> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| EconError::file(path, e))?;
    let rows = reader
        .deserialize()
        .collect::<std::result::Result<Vec<BudgetObs>, _>>()
        .map_err(|e| EconError::file(path, e))?;
    if rows.is_empty() {
        return Err(EconError::file(path, EconError::EmptyPanel));
    }
    Ok(rows)
}

pub fn write_budget_csv(rows: &[BudgetObs], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| EconError::file(path, e))?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
