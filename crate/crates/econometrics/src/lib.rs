//! Share regressions for country-year budget panels: pooled least squares,
//! fractional probit and heteroskedastic fractional probit, with classical,
//! robust and country-clustered variances and marginal effects.

pub mod design;
pub mod effects;
pub mod error;
pub mod fit;
pub mod ols;
pub mod panel;
pub mod probit;
pub mod simulate;

pub use design::{build_design, Dependent, Design, Estimator, ModelSpec, PowerIndex, Term};
pub use effects::{fitted_mean, marginal_effects, EffectAt, MarginalEffect};
pub use error::{EconError, Result};
pub use fit::{stars, Block, Coefficient, FitOptions, FitResult, VcovKind, WaldTest};
pub use ols::fit_ols;
pub use panel::{BudgetObs, JoinReport, PanelDataset, PanelObs, PowerObs};
pub use probit::{fit_fhetprob, fit_fhetprob_restricted, fit_fractional_probit};

/// Builds the design for `spec` and fits it, clustering by country when the
/// spec asks for it.
pub fn fit_spec(panel: &PanelDataset, spec: &ModelSpec) -> Result<(Design, FitResult)> {
    let design = build_design(panel, spec)?;
    let options = if spec.cluster { FitOptions::clustered() } else { FitOptions::default() };
    let fit = match spec.estimator {
        Estimator::Ols => fit_ols(&design, options)?,
        Estimator::FractionalProbit => fit_fractional_probit(&design, options)?,
        Estimator::Fhetprob => fit_fhetprob(&design, options)?,
    };
    Ok((design, fit))
}
