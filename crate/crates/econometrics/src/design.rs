//! Regressor matrices for the budget-share equation.

use nalgebra::{DMatrix, DVector};

use crate::error::{EconError, Result};
use crate::panel::{PanelDataset, ENLARGEMENTS, TOBS};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dependent {
    /// Total expenditure share.
    Exp,
    /// Share adjusted for rebates and compensations.
    ExpAdj,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PowerIndex {
    Ssi,
    Nucl,
}

impl PowerIndex {
    pub fn column(self) -> &'static str {
        match self {
            PowerIndex::Ssi => "p_ssi",
            PowerIndex::Nucl => "p_nucl",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Estimator {
    Ols,
    FractionalProbit,
    /// Fractional probit with mean `Phi(x b / exp(z g))`.
    Fhetprob,
}

impl Estimator {
    pub fn label(self) -> &'static str {
        match self {
            Estimator::Ols => "OLS",
            Estimator::FractionalProbit => "GLM",
            Estimator::Fhetprob => "FHETPROB",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModelSpec {
    pub dependent: Dependent,
    pub power: PowerIndex,
    /// Adds `EU10 .. EU27` and their interactions with power.
    pub enlargement: bool,
    pub estimator: Estimator,
    pub cluster: bool,
}

/// How a column depends on the underlying variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    /// The variable itself.
    Variable(String),
    /// Product of two variables, both also present as columns.
    Interaction(String, String),
    Constant,
}

/// Response, mean-equation regressors, variance-equation regressors and
/// cluster ids. `z` has zero columns for models without a variance equation.
#[derive(Clone, Debug, PartialEq)]
pub struct Design {
    pub y: DVector<f64>,
    pub x: DMatrix<f64>,
    pub names: Vec<String>,
    pub terms: Vec<Term>,
    pub z: DMatrix<f64>,
    pub z_names: Vec<String>,
    pub clusters: Vec<usize>,
}

impl Design {
    /// A design whose columns are plain variables named `names`, the column
    /// called `_cons` being the intercept.
    pub fn from_matrices(
        y: DVector<f64>,
        x: DMatrix<f64>,
        names: Vec<String>,
        z: DMatrix<f64>,
        z_names: Vec<String>,
        clusters: Vec<usize>,
    ) -> Result<Self> {
        let n = y.len();
        if n == 0 {
            return Err(EconError::EmptyPanel);
        }
        if x.nrows() != n || z.nrows() != n || clusters.len() != n {
            return Err(EconError::Specification("row counts differ".into()));
        }
        if names.len() != x.ncols() || z_names.len() != z.ncols() {
            return Err(EconError::Specification("one name per column is required".into()));
        }
        let terms = names
            .iter()
            .map(|n| if n == "_cons" { Term::Constant } else { Term::Variable(n.clone()) })
            .collect();
        Ok(Design {
            y,
            x,
            names,
            terms,
            z,
            z_names,
            clusters,
        })
    }

    pub fn n(&self) -> usize {
        self.y.len()
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Number of distinct clusters.
    pub fn cluster_count(&self) -> usize {
        let mut ids = self.clusters.clone();
        ids.sort_unstable();
        ids.dedup();
        ids.len()
    }

    /// Derivative of mean-equation column `j` with respect to `variable` at
    /// observation `i`.
    pub fn column_derivative(&self, j: usize, variable: &str, i: usize) -> f64 {
        match &self.terms[j] {
            Term::Variable(v) => f64::from(u8::from(v == variable)),
            Term::Interaction(a, b) => {
                let other = |w: &str| self.column(w).map_or(0.0, |c| self.x[(i, c)]);
                let mut d = 0.0;
                if a == variable {
                    d += other(b);
                }
                if b == variable {
                    d += other(a);
                }
                d
            }
            Term::Constant => 0.0,
        }
    }

    /// Whether `variable` enters any column of either equation.
    pub fn mentions(&self, variable: &str) -> bool {
        self.terms.iter().any(|t| match t {
            Term::Variable(v) => v == variable,
            Term::Interaction(a, b) => a == variable || b == variable,
            Term::Constant => false,
        }) || self.z_names.iter().any(|z| z == variable)
    }

    /// The design with `variable` increased by `h` everywhere it enters,
    /// interactions recomputed.
    pub fn shifted(&self, variable: &str, h: f64) -> Design {
        let mut out = self.clone();
        if let Some(c) = self.column(variable) {
            for i in 0..self.n() {
                out.x[(i, c)] += h;
            }
        }
        for (j, t) in self.terms.iter().enumerate() {
            if let Term::Interaction(a, b) = t {
                if a == variable || b == variable {
                    let (ca, cb) = (out.column(a), out.column(b));
                    if let (Some(ca), Some(cb)) = (ca, cb) {
                        for i in 0..self.n() {
                            out.x[(i, j)] = out.x[(i, ca)] * out.x[(i, cb)];
                        }
                    }
                }
            }
        }
        if let Some(k) = self.z_names.iter().position(|z| z == variable) {
            for i in 0..self.n() {
                out.z[(i, k)] += h;
            }
        }
        out
    }
}

/// Builds the regressors for `spec`: power, agri, income, then (with
/// enlargement) power x `EU10 .. EU27` and `EU10 .. EU27`, then (for the
/// heteroskedastic model) `tobs32 .. tobs6`, then `_cons`. The variance
/// equation of the heteroskedastic model uses the `tobs` dummies.
pub fn build_design(panel: &PanelDataset, spec: &ModelSpec) -> Result<Design> {
    let n = panel.len();
    if n == 0 {
        return Err(EconError::EmptyPanel);
    }
    let tobs: Vec<[f64; 5]> = (0..n).map(|i| panel.tobs_dummies(i)).collect();
    let tobs_names: Vec<String> = TOBS.iter().map(|t| format!("tobs{t}")).collect();
    if spec.estimator == Estimator::Fhetprob {
        if let Some(k) = (0..TOBS.len()).find(|&k| tobs.iter().all(|d| d[k] == 0.0)) {
            return Err(EconError::Specification(format!(
                "the heteroskedastic probit needs the tobs dummies as variance covariates, \
                 but no country is observed for exactly {} years ({} is zero)",
                TOBS[k], tobs_names[k]
            )));
        }
    }
    let obs = panel.obs();
    let power = spec.power.column();
    let mut columns: Vec<(String, Term, Vec<f64>)> = Vec::new();
    let power_values: Vec<f64> = obs
        .iter()
        .map(|o| match spec.power {
            PowerIndex::Ssi => o.p_ssi,
            PowerIndex::Nucl => o.p_nucl,
        })
        .collect();
    columns.push((power.into(), Term::Variable(power.into()), power_values.clone()));
    columns.push(("agri".into(), Term::Variable("agri".into()), obs.iter().map(|o| o.agri).collect()));
    columns.push(("income".into(), Term::Variable("income".into()), obs.iter().map(|o| o.income).collect()));
    if spec.enlargement {
        let dummies: Vec<[f64; 5]> = (0..n).map(|i| panel.enlargement_dummies(i)).collect();
        for (k, size) in ENLARGEMENTS.iter().enumerate() {
            let eu = format!("EU{size}");
            columns.push((
                format!("{power}{eu}"),
                Term::Interaction(power.into(), eu.clone()),
                (0..n).map(|i| power_values[i] * dummies[i][k]).collect(),
            ));
        }
        for (k, size) in ENLARGEMENTS.iter().enumerate() {
            let eu = format!("EU{size}");
            columns.push((eu.clone(), Term::Variable(eu), dummies.iter().map(|d| d[k]).collect()));
        }
    }
    if spec.estimator == Estimator::Fhetprob {
        for (k, name) in tobs_names.iter().enumerate() {
            columns.push((name.clone(), Term::Variable(name.clone()), tobs.iter().map(|d| d[k]).collect()));
        }
    }
    columns.push(("_cons".into(), Term::Constant, vec![1.0; n]));
    for (name, _, values) in &columns {
        if values.iter().all(|&v| v == 0.0) {
            return Err(EconError::ZeroColumn(name.clone()));
        }
    }
    let x = DMatrix::from_fn(n, columns.len(), |i, j| columns[j].2[i]);
    let (z, z_names) = if spec.estimator == Estimator::Fhetprob {
        (DMatrix::from_fn(n, 5, |i, k| tobs[i][k]), tobs_names)
    } else {
        (DMatrix::zeros(n, 0), Vec::new())
    };
    let y = DVector::from_iterator(
        n,
        obs.iter().map(|o| match spec.dependent {
            Dependent::Exp => o.exp,
            Dependent::ExpAdj => o.exp_adj,
        }),
    );
    let mut ids: Vec<&str> = obs.iter().map(|o| o.country.as_str()).collect();
    ids.sort_unstable();
    ids.dedup();
    let clusters = obs
        .iter()
        .map(|o| ids.binary_search(&o.country.as_str()).expect("country listed"))
        .collect();
    let (names, terms): (Vec<String>, Vec<Term>) = columns.into_iter().map(|(n, t, _)| (n, t)).unzip();
    Ok(Design {
        y,
        x,
        names,
        terms,
        z,
        z_names,
        clusters,
    })
}
