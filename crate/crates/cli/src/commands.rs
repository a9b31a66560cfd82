use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use powerkit_core::eu::{self, CouncilConfig, PowerTable, PANEL_YEARS};
use powerkit_core::indices::{self, IndexKind};
use powerkit_core::io::read_game;
use powerkit_core::rational::{parse_rational, ratio, to_f64, Rational};
use powerkit_core::{Execution, GameError};
use powerkit_econometrics::simulate::{simulate_budget, BudgetSimulation};
use powerkit_econometrics::{
    self as econ, marginal_effects, Block, EconError, EffectAt, Estimator, FitResult, ModelSpec, PanelDataset, PowerObs,
};
use serde_json::json;
use thiserror::Error;

use crate::render::{Format, RenderSpec, Table};
use crate::{At, Cluster, Command, Dep, Model, Power};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Econ(#[from] EconError),
    #[error("{message}")]
    Reference { message: String, output: String },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Game(_) | CliError::Econ(_) => 2,
            CliError::Reference { .. } => 3,
        }
    }

    /// Report produced before the failure, printed to stdout.
    pub fn output(&self) -> Option<&str> {
        match self {
            CliError::Reference { output, .. } => Some(output),
            _ => None,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

pub fn run(command: Command) -> Result<String> {
    match command {
        Command::Power {
            game,
            index,
            exact,
            output,
        } => power(&game, &parse_kinds(&index)?, exact, output.spec()),
        Command::EuHistory {
            data,
            periods,
            indices,
            reference,
            allowlist,
            no_allowlist,
            tolerance,
            no_check,
            output,
        } => {
            let dir = data.unwrap_or_else(eu::shipped_data_dir);
            let tolerance = tolerance
                .map(|t| parse_rational(&t).map_err(|_| CliError::Usage(format!("invalid tolerance {t:?}"))))
                .transpose()?;
            let check = (!no_check).then(|| Check {
                reference: reference.unwrap_or_else(|| dir.join("reference/appendix1.csv")),
                allowlist: if no_allowlist {
                    None
                } else {
                    Some(allowlist.unwrap_or_else(|| dir.join("reference/allowlist.csv")))
                },
                tolerance,
            });
            eu_history(&dir, &periods, &parse_kinds(&indices)?, check.as_ref(), output.spec())
        }
        Command::Panel {
            config,
            shares,
            synthetic,
            seed,
            write_shares,
            out,
        } => {
            let dir = config.unwrap_or_else(eu::shipped_data_dir);
            let source = match (shares, synthetic) {
                (Some(path), _) => Shares::File(path),
                (None, _) => Shares::Synthetic { seed, write: write_shares },
            };
            panel(&dir, source, &out)
        }
        Command::Fit {
            panel,
            dep,
            power,
            model,
            cluster,
            margins,
            at,
            output,
        } => {
            let spec = ModelSpec {
                dependent: match dep {
                    Dep::Exp => econ::Dependent::Exp,
                    Dep::ExpAdj => econ::Dependent::ExpAdj,
                },
                power: match power {
                    Power::Ssi => econ::PowerIndex::Ssi,
                    Power::Nucl => econ::PowerIndex::Nucl,
                },
                enlargement: !matches!(model, Model::Ols),
                estimator: match model {
                    Model::Ols | Model::OlsD => Estimator::Ols,
                    Model::Glm => Estimator::FractionalProbit,
                    Model::Fhetprob => Estimator::Fhetprob,
                },
                cluster: matches!(cluster, Cluster::Country),
            };
            let at = match at {
                At::Average => EffectAt::Average,
                At::Means => EffectAt::Means,
            };
            fit(&panel, &spec, margins.then_some(at), output.spec())
        }
    }
}

fn parse_kinds(names: &[String]) -> Result<Vec<IndexKind>> {
    let mut kinds = Vec::new();
    for n in names {
        let k: IndexKind = n.parse().map_err(|e: GameError| CliError::Usage(e.to_string()))?;
        if !kinds.contains(&k) {
            kinds.push(k);
        }
    }
    if kinds.is_empty() {
        return Err(CliError::Usage("no index requested".into()));
    }
    Ok(kinds)
}

fn power(path: &Path, kinds: &[IndexKind], exact: bool, spec: RenderSpec) -> Result<String> {
    let game = read_game(path)?;
    let profiles = kinds
        .iter()
        .map(|&k| indices::compute(&game, k))
        .collect::<powerkit_core::Result<Vec<_>>>()?;
    let single_rule = game.rules().len() == 1;
    let mut headers = vec!["Member".to_string()];
    if single_rule {
        headers.push("Weight".into());
    }
    for k in kinds {
        headers.push(k.heading().into());
        if exact {
            headers.push(format!("{} exact", k.heading()));
        }
    }
    let mut table = Table::new(headers).titled(format!("{} ({} members)", game.name(), game.n()));
    for i in 0..game.n() {
        let mut row = vec![game.players()[i].label.clone()];
        if single_rule {
            row.push(game.rules()[0].weights()[i].to_string());
        }
        for p in &profiles {
            row.push(spec.rational(&p.values[i]));
            if exact {
                row.push(p.values[i].to_string());
            }
        }
        table.push(row);
    }
    Ok(table.render(spec.format))
}

struct Check {
    reference: PathBuf,
    allowlist: Option<PathBuf>,
    tolerance: Option<Rational>,
}

fn select_periods(configs: Vec<CouncilConfig>, years: &[u32]) -> Result<Vec<CouncilConfig>> {
    if years.is_empty() {
        return Ok(configs);
    }
    for y in years {
        if !configs.iter().any(|c| c.covers(*y)) {
            return Err(CliError::Usage(format!("no configuration covers {y}")));
        }
    }
    Ok(configs.into_iter().filter(|c| years.iter().any(|&y| c.covers(y))).collect())
}

/// Tolerance used when none is given: printed values before the Nice rules
/// are matched to rounding, later ones allow for the population vintage.
fn default_tolerance(table: &PowerTable) -> Rational {
    let start: u32 = table.period[..4].parse().unwrap_or(0);
    if start >= 2003 {
        ratio(1, 500)
    } else {
        ratio(1, 2000)
    }
}

fn eu_history(dir: &Path, years: &[u32], kinds: &[IndexKind], check: Option<&Check>, spec: RenderSpec) -> Result<String> {
    let configs = select_periods(eu::load_council_configs(dir)?, years)?;
    let tables = eu::period_power_tables(&configs, kinds, Execution::default())?;
    let mut out = String::new();
    match spec.format {
        Format::Csv => {
            let mut t = Table::new(["period", "country", "index", "value"]);
            for table in &tables {
                for p in &table.profiles {
                    for (m, v) in table.members.iter().zip(&p.values) {
                        t.push(vec![table.period.clone(), m.clone(), p.kind.short_name().into(), spec.rational(v)]);
                    }
                }
            }
            out.push_str(&t.render(Format::Csv));
        }
        _ => {
            for table in &tables {
                let mut headers = vec!["Member".to_string()];
                headers.extend(table.profiles.iter().map(|p| p.kind.heading().to_string()));
                let mut t = Table::new(headers).titled(format!("{} ({} members)", table.period, table.members.len()));
                for (i, m) in table.members.iter().enumerate() {
                    let mut row = vec![m.clone()];
                    row.extend(table.profiles.iter().map(|p| spec.rational(&p.values[i])));
                    t.push(row);
                }
                out.push_str(&t.render(spec.format));
                out.push('\n');
            }
        }
    }
    let Some(check) = check else { return Ok(out) };
    let reference = eu::load_reference(&check.reference)?;
    let allowlist = match &check.allowlist {
        Some(p) => eu::load_allowlist(p)?,
        None => Vec::new(),
    };
    let mut failed = 0;
    let mut report = String::new();
    for table in &tables {
        let tol = check.tolerance.clone().unwrap_or_else(|| default_tolerance(table));
        let r = eu::compare_to_reference(std::slice::from_ref(table), &reference, &tol, &allowlist);
        failed += r.failures().len();
        let _ = write!(report, "{}: {r}", table.period);
    }
    if spec.format == Format::Csv {
        eprint!("{report}");
    } else {
        out.push_str("Reference check\n");
        out.push_str(&report);
    }
    if failed > 0 {
        return Err(CliError::Reference {
            message: format!("cells differing from the reference beyond tolerance: {failed}"),
            output: out,
        });
    }
    Ok(out)
}

enum Shares {
    File(PathBuf),
    Synthetic { seed: u64, write: Option<PathBuf> },
}

fn power_panel(dir: &Path) -> Result<Vec<PowerObs>> {
    let configs = eu::load_council_configs(dir)?;
    let kinds = [IndexKind::ShapleyShubik, IndexKind::Nucleolus];
    let tables = eu::period_power_tables(&configs, &kinds, Execution::default())?;
    let rows = eu::build_power_panel(&configs, &tables, PANEL_YEARS)?;
    Ok(rows
        .into_iter()
        .map(|r| PowerObs {
            country: r.country,
            year: r.year,
            p_ssi: to_f64(&r.p_ssi),
            p_nucl: to_f64(&r.p_nucl),
        })
        .collect())
}

fn panel(dir: &Path, shares: Shares, out: &Path) -> Result<String> {
    let power = power_panel(dir)?;
    let budget = match shares {
        Shares::File(path) => econ::panel::read_budget_csv(&path)?,
        Shares::Synthetic { seed, write } => {
            let sim = BudgetSimulation {
                seed,
                ..BudgetSimulation::default()
            };
            let rows = simulate_budget(&sim, &power);
            if let Some(path) = write {
                econ::panel::write_budget_csv(&rows, &path)?;
            }
            rows
        }
    };
    let (obs, report) = PanelDataset::join(&budget, &power);
    if !report.is_complete() {
        let mut msg = String::from("budget and power panels do not match");
        let list = |keys: &[(String, u32)]| keys.iter().map(|(c, y)| format!("{c} {y}")).collect::<Vec<_>>().join(", ");
        if !report.missing_power.is_empty() {
            let _ = write!(msg, "\n  no power for: {}", list(&report.missing_power));
        }
        if !report.missing_budget.is_empty() {
            let _ = write!(msg, "\n  no budget shares for: {}", list(&report.missing_budget));
        }
        return Err(CliError::Econ(EconError::Specification(msg)));
    }
    let dataset = PanelDataset::new(obs)?;
    dataset.write_csv(out)?;
    Ok(format!(
        "{} rows, {} countries, {}-{} written to {}\n",
        dataset.len(),
        dataset.countries(),
        PANEL_YEARS.start(),
        PANEL_YEARS.end(),
        out.display()
    ))
}

fn fit(path: &Path, spec: &ModelSpec, margins: Option<EffectAt>, render: RenderSpec) -> Result<String> {
    let panel = PanelDataset::read_csv(path)?;
    let (design, fit) = econ::fit_spec(&panel, spec)?;
    let power = spec.power.column();
    let effects = match margins {
        Some(at) => Some((at, marginal_effects(&fit, &design, &[power, "agri", "income"], at)?)),
        None => None,
    };
    if render.format == Format::Json {
        return Ok(fit_json(spec, &fit, effects.as_ref()) + "\n");
    }
    let label = match (spec.estimator, spec.enlargement) {
        (Estimator::Ols, true) => "OLS_d",
        (e, _) => e.label(),
    };
    let dep = match spec.dependent {
        econ::Dependent::Exp => "exp",
        econ::Dependent::ExpAdj => "exp_adj",
    };
    let vcov = match fit.n_clusters {
        Some(g) => format!("standard errors clustered by country ({g} clusters)"),
        None => "classical standard errors".into(),
    };
    let mut t = Table::new(["", label]).titled(format!("{label}: {dep} on {power}, {vcov}"));
    let mut block = Block::Mean;
    for c in &fit.coefficients {
        if c.block != block {
            block = c.block;
            t.push(vec!["lnsigma2".into(), String::new()]);
        }
        t.push(vec![c.name.clone(), format!("{}{}", render.float(c.estimate), c.stars())]);
        t.push(vec![String::new(), format!("({})", render.float(c.std_error))]);
    }
    t.push(vec!["N".into(), fit.n_obs.to_string()]);
    match fit.estimator {
        Estimator::Ols => {
            t.push(vec!["R2 adj".into(), render.float(fit.r2_adj.unwrap_or(f64::NAN))]);
        }
        _ => {
            t.push(vec!["aic".into(), render.float(fit.aic)]);
            t.push(vec!["bic".into(), render.float(fit.bic)]);
            if let Some(w) = fit.chi2 {
                t.push(vec!["chi2".into(), render.float(w.statistic)]);
            }
        }
    }
    let mut out = t.render(render.format);
    if render.format != Format::Csv {
        out.push_str("+ p<0.10, * p<0.05, ** p<0.01\n");
    }
    if let Some((at, effects)) = effects {
        let what = match at {
            EffectAt::Average => "average marginal effects",
            EffectAt::Means => "marginal effects at means",
        };
        let mut m = Table::new(["", "dy/dx", "se"]).titled(format!("{label}: {what}"));
        for e in &effects {
            m.push(vec![e.name.clone(), format!("{}{}", render.float(e.effect), e.stars()), render.float(e.std_error)]);
        }
        out.push('\n');
        out.push_str(&m.render(render.format));
    }
    Ok(out)
}

fn fit_json(spec: &ModelSpec, fit: &FitResult, effects: Option<&(EffectAt, Vec<econ::MarginalEffect>)>) -> String {
    let coefficients: Vec<_> = fit
        .coefficients
        .iter()
        .map(|c| {
            json!({
                "name": c.name,
                "block": match c.block { Block::Mean => "mean", Block::LnSigma2 => "lnsigma2" },
                "estimate": c.estimate,
                "std_error": c.std_error,
                "statistic": c.statistic,
                "p_value": c.p_value,
                "stars": c.stars(),
            })
        })
        .collect();
    let vcov: Vec<Vec<f64>> = (0..fit.vcov.nrows()).map(|i| fit.vcov.row(i).iter().copied().collect()).collect();
    let doc = json!({
        "estimator": fit.estimator.label(),
        "enlargement": spec.enlargement,
        "power": spec.power.column(),
        "n_obs": fit.n_obs,
        "n_clusters": fit.n_clusters,
        "coefficients": coefficients,
        "vcov": vcov,
        "r2": fit.r2,
        "r2_adj": fit.r2_adj,
        "log_likelihood": fit.log_likelihood,
        "aic": fit.aic,
        "bic": fit.bic,
        "chi2": fit.chi2.map(|w| json!({"statistic": w.statistic, "df": w.df, "p_value": w.p_value})),
        "iterations": fit.iterations,
        "gradient_norm": fit.gradient_norm,
        "marginal_effects": effects.map(|(at, list)| json!({
            "at": match at { EffectAt::Average => "average", EffectAt::Means => "means" },
            "effects": list.iter().map(|e| json!({
                "name": e.name,
                "effect": e.effect,
                "std_error": e.std_error,
                "p_value": e.p_value,
            })).collect::<Vec<_>>(),
        })),
    });
    serde_json::to_string_pretty(&doc).expect("finite document")
}
