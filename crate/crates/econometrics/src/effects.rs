//! Marginal effects of regressors on the fitted mean share.

use nalgebra::{DMatrix, DVector};
use statrs::distribution::{ContinuousCDF, Normal, StudentsT};

use crate::design::{Design, Estimator};
use crate::error::{EconError, Result};
use crate::fit::FitResult;
use crate::probit::pdf;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum EffectAt {
    /// Average over observations of the derivative.
    #[default]
    Average,
    /// Derivative at the column means.
    Means,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MarginalEffect {
    pub name: String,
    pub effect: f64,
    /// Delta method with a numerical Jacobian.
    pub std_error: f64,
    pub statistic: f64,
    pub p_value: f64,
}

impl MarginalEffect {
    pub fn stars(&self) -> &'static str {
        crate::fit::stars(self.p_value)
    }
}

/// Estimates padded with zeros for parameters held fixed.
fn full_theta(fit: &FitResult, design: &Design) -> DVector<f64> {
    let theta = fit.theta();
    let k = match fit.estimator {
        Estimator::Ols => design.x.ncols(),
        _ => design.x.ncols() + design.z.ncols(),
    };
    let mut full = DVector::zeros(k);
    full.rows_mut(0, theta.len()).copy_from(&theta);
    full
}

/// Fitted mean for every observation of `design` at the estimates of `fit`.
pub fn fitted_mean(fit: &FitResult, design: &Design) -> DVector<f64> {
    mean_at(fit.estimator, design, &full_theta(fit, design))
}

fn mean_at(estimator: Estimator, design: &Design, theta: &DVector<f64>) -> DVector<f64> {
    match estimator {
        Estimator::Ols => &design.x * theta.rows(0, design.x.ncols()),
        _ => crate::probit::predict(design, theta),
    }
}

/// One-row design at the column means.
fn at_means(design: &Design) -> Design {
    let row = |m: &DMatrix<f64>| DMatrix::from_fn(1, m.ncols(), |_, j| m.column(j).mean());
    Design {
        y: DVector::from_element(1, design.y.mean()),
        x: row(&design.x),
        z: row(&design.z),
        clusters: vec![0],
        ..design.clone()
    }
}

fn effect(estimator: Estimator, design: &Design, theta: &DVector<f64>, variable: &str) -> f64 {
    let kx = design.x.ncols();
    let n = design.n() as f64;
    if estimator == Estimator::Ols {
        return (0..kx)
            .map(|j| {
                let mean_derivative = (0..design.n()).map(|i| design.column_derivative(j, variable, i)).sum::<f64>() / n;
                theta[j] * mean_derivative
            })
            .sum();
    }
    let total: f64 = (0..design.n())
        .map(|i| {
            let dxb: f64 = (0..kx).map(|j| theta[j] * design.column_derivative(j, variable, i)).sum();
            let xb: f64 = (0..kx).map(|j| design.x[(i, j)] * theta[j]).sum();
            let zg: f64 = (0..design.z.ncols()).map(|k| design.z[(i, k)] * theta[kx + k]).sum();
            let dzg: f64 = (0..design.z.ncols())
                .filter(|&k| design.z_names[k] == variable)
                .map(|k| theta[kx + k])
                .sum();
            let s = zg.exp();
            let v = xb / s;
            pdf(v) * (dxb / s - v * dzg)
        })
        .sum();
    total / n
}

/// Marginal effect of each named variable on the mean. Variables entering
/// interactions or the variance equation get the total derivative. Least
/// squares without interactions returns the coefficients themselves.
pub fn marginal_effects(fit: &FitResult, design: &Design, variables: &[&str], at: EffectAt) -> Result<Vec<MarginalEffect>> {
    if let Some(v) = variables.iter().find(|v| !design.mentions(v)) {
        return Err(EconError::UnknownCoefficient(v.to_string()));
    }
    let evaluated = match at {
        EffectAt::Average => design.clone(),
        EffectAt::Means => at_means(design),
    };
    let theta = full_theta(fit, design);
    let free = fit.k();
    let reference = match (fit.estimator, fit.n_clusters) {
        (Estimator::Ols, Some(g)) => Some(StudentsT::new(0.0, 1.0, g as f64 - 1.0).expect("positive degrees of freedom")),
        (Estimator::Ols, None) => {
            Some(StudentsT::new(0.0, 1.0, (fit.n_obs - free) as f64).expect("positive degrees of freedom"))
        }
        _ => None,
    };
    let normal = Normal::standard();
    Ok(variables
        .iter()
        .map(|&variable| {
            let value = effect(fit.estimator, &evaluated, &theta, variable);
            let jacobian = DVector::from_fn(free, |j, _| {
                let h = 1e-6 * theta[j].abs().max(1.0);
                let (mut up, mut down) = (theta.clone(), theta.clone());
                up[j] += h;
                down[j] -= h;
                (effect(fit.estimator, &evaluated, &up, variable) - effect(fit.estimator, &evaluated, &down, variable))
                    / (2.0 * h)
            });
            let variance = (jacobian.transpose() * &fit.vcov * &jacobian)[(0, 0)];
            let std_error = variance.max(0.0).sqrt();
            let statistic = value / std_error;
            let tail = match &reference {
                Some(t) => t.cdf(-statistic.abs()),
                None => normal.cdf(-statistic.abs()),
            };
            MarginalEffect {
                name: variable.to_string(),
                effect: value,
                std_error,
                statistic,
                p_value: 2.0 * tail,
            }
        })
        .collect())
}
