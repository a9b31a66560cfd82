//! Fractional probit and heteroskedastic fractional probit by Bernoulli
//! quasi-maximum likelihood.
//!
//! The mean is `Phi(v)` with `v = x b / exp(z g)`; the plain fractional
//! probit is the case where `z` has no columns.

use std::f64::consts::{PI, SQRT_2};

use nalgebra::{Cholesky, DMatrix, DVector};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::design::{Design, Estimator};
use crate::error::{EconError, Result};
use crate::fit::{coefficients, information_criteria, max_norm, sandwich, symmetrize, wald_slopes, FitOptions, FitResult, Reference, VcovKind};
use crate::ols::lstsq;

/// Convergence threshold on the gradient max-norm.
pub const GRADIENT_TOLERANCE: f64 = 1e-9;
/// Newton iteration cap.
pub const MAX_ITERATIONS: usize = 200;
/// Bound on `|z g|`; steps beyond it are rejected.
pub const INDEX_BOUND: f64 = 30.0;

const MAX_HALVINGS: usize = 60;

pub fn pdf(v: f64) -> f64 {
    (-0.5 * v * v).exp() / (2.0 * PI).sqrt()
}

/// Standard normal distribution function, accurate in both tails.
pub fn cdf(v: f64) -> f64 {
    0.5 * libm::erfc(-v / SQRT_2)
}

/// `ln Phi(v)` and the inverse Mills ratio `phi(v) / Phi(v)`.
fn log_cdf_and_mills(v: f64) -> (f64, f64) {
    if v > -30.0 {
        let c = cdf(v);
        (c.ln(), pdf(v) / c)
    } else {
        // Phi(v) = phi(v) / (-v) * (1 - 1/v^2 + 3/v^4 - ...)
        let series = 1.0 - 1.0 / (v * v) + 3.0 / v.powi(4);
        let mills = -v / series;
        (-0.5 * v * v - 0.5 * (2.0 * PI).ln() - mills.ln(), mills)
    }
}

fn check_response(y: &DVector<f64>) -> Result<()> {
    match y.iter().position(|v| !(0.0..=1.0).contains(v)) {
        Some(row) => Err(EconError::ResponseOutOfRange { row, value: y[row] }),
        None => Ok(()),
    }
}

/// Per-observation pieces at `theta`.
struct Point {
    v: f64,
    s: f64,
    /// `d l / d v`.
    g: f64,
    /// `d2 l / d v2`.
    h: f64,
    loglik: f64,
}

/// Index function and its derivatives for one observation; `None` when
/// `|z g|` exceeds the bound.
fn point(design: &Design, theta: &DVector<f64>, i: usize) -> Option<Point> {
    let kx = design.x.ncols();
    let mut xb = 0.0;
    for j in 0..kx {
        xb += design.x[(i, j)] * theta[j];
    }
    let mut zg = 0.0;
    for j in 0..design.z.ncols() {
        zg += design.z[(i, j)] * theta[kx + j];
    }
    if zg.abs() > INDEX_BOUND {
        return None;
    }
    let s = zg.exp();
    let v = xb / s;
    let y = design.y[i];
    let (ln_p, a) = log_cdf_and_mills(v);
    let (ln_q, b) = log_cdf_and_mills(-v);
    let mut loglik = 0.0;
    if y > 0.0 {
        loglik += y * ln_p;
    }
    if y < 1.0 {
        loglik += (1.0 - y) * ln_q;
    }
    let g = y * a - (1.0 - y) * b;
    let h = y * (-v * a - a * a) - (1.0 - y) * (-v * b + b * b);
    Some(Point { v, s, g, h, loglik })
}

/// Gradient of `v` with respect to `(b, g)`.
fn index_gradient(design: &Design, i: usize, p: &Point, out: &mut DVector<f64>) {
    let kx = design.x.ncols();
    for j in 0..kx {
        out[j] = design.x[(i, j)] / p.s;
    }
    for j in 0..design.z.ncols() {
        out[kx + j] = -p.v * design.z[(i, j)];
    }
}

fn parameter_count(design: &Design) -> usize {
    design.x.ncols() + design.z.ncols()
}

/// Quasi-log-likelihood at `theta = (b, g)`; `-inf` outside the bound.
pub fn quasi_loglik(design: &Design, theta: &DVector<f64>) -> f64 {
    let mut total = 0.0;
    for i in 0..design.n() {
        match point(design, theta, i) {
            Some(p) => total += p.loglik,
            None => return f64::NEG_INFINITY,
        }
    }
    total
}

/// Analytic gradient of [`quasi_loglik`].
pub fn score(design: &Design, theta: &DVector<f64>) -> DVector<f64> {
    let k = parameter_count(design);
    let mut grad = DVector::zeros(k);
    let mut dv = DVector::zeros(k);
    for i in 0..design.n() {
        if let Some(p) = point(design, theta, i) {
            index_gradient(design, i, &p, &mut dv);
            grad.axpy(p.g, &dv, 1.0);
        }
    }
    grad
}

/// Per-observation scores, one row each.
fn score_rows(design: &Design, theta: &DVector<f64>) -> DMatrix<f64> {
    let k = parameter_count(design);
    let mut rows = DMatrix::zeros(design.n(), k);
    let mut dv = DVector::zeros(k);
    for i in 0..design.n() {
        if let Some(p) = point(design, theta, i) {
            index_gradient(design, i, &p, &mut dv);
            for j in 0..k {
                rows[(i, j)] = p.g * dv[j];
            }
        }
    }
    rows
}

/// Analytic Hessian of [`quasi_loglik`].
pub fn hessian(design: &Design, theta: &DVector<f64>) -> DMatrix<f64> {
    let k = parameter_count(design);
    let kx = design.x.ncols();
    let kz = design.z.ncols();
    let mut hess = DMatrix::zeros(k, k);
    let mut dv = DVector::zeros(k);
    for i in 0..design.n() {
        let Some(p) = point(design, theta, i) else { continue };
        index_gradient(design, i, &p, &mut dv);
        hess.ger(p.h, &dv, &dv, 1.0);
        for a in 0..kx {
            for c in 0..kz {
                let d = -p.g * design.x[(i, a)] * design.z[(i, c)] / p.s;
                hess[(a, kx + c)] += d;
                hess[(kx + c, a)] += d;
            }
        }
        for a in 0..kz {
            for c in 0..kz {
                hess[(kx + a, kx + c)] += p.g * p.v * design.z[(i, a)] * design.z[(i, c)];
            }
        }
    }
    hess
}

/// Expected information, used when the observed one is not positive definite.
fn fisher_information(design: &Design, theta: &DVector<f64>) -> DMatrix<f64> {
    let k = parameter_count(design);
    let mut info = DMatrix::zeros(k, k);
    let mut dv = DVector::zeros(k);
    for i in 0..design.n() {
        let Some(p) = point(design, theta, i) else { continue };
        index_gradient(design, i, &p, &mut dv);
        let c = cdf(p.v);
        let w = pdf(p.v).powi(2) / (c * (1.0 - c)).max(f64::MIN_POSITIVE);
        info.ger(w, &dv, &dv, 1.0);
    }
    info
}

/// Mean prediction `Phi(x b / exp(z g))` for every observation.
pub fn predict(design: &Design, theta: &DVector<f64>) -> DVector<f64> {
    let kx = design.x.ncols();
    DVector::from_fn(design.n(), |i, _| {
        let xb: f64 = (0..kx).map(|j| design.x[(i, j)] * theta[j]).sum();
        let zg: f64 = (0..design.z.ncols()).map(|j| design.z[(i, j)] * theta[kx + j]).sum();
        cdf(xb / zg.exp())
    })
}

struct Optimum {
    theta: DVector<f64>,
    loglik: f64,
    gradient_norm: f64,
    iterations: usize,
}

/// Newton ascent with step-halving. Parameters beyond `free` stay fixed.
fn maximize(design: &Design, start: DVector<f64>, free: usize) -> Result<Optimum> {
    let mut theta = start;
    let mut loglik = quasi_loglik(design, &theta);
    if !loglik.is_finite() {
        return Err(EconError::Specification("starting values give a non-finite quasi-log-likelihood".into()));
    }
    let mut grad = score(design, &theta).rows(0, free).into_owned();
    for iteration in 0..MAX_ITERATIONS {
        let norm = max_norm(&grad);
        if norm < GRADIENT_TOLERANCE {
            return Ok(Optimum {
                theta,
                loglik,
                gradient_norm: norm,
                iterations: iteration,
            });
        }
        let neg_hess = -hessian(design, &theta).view((0, 0), (free, free)).into_owned();
        let direction = match Cholesky::new(neg_hess) {
            Some(ch) => ch.solve(&grad),
            None => {
                let info = fisher_information(design, &theta).view((0, 0), (free, free)).into_owned();
                match Cholesky::new(info) {
                    Some(ch) => ch.solve(&grad),
                    None => grad.clone(),
                }
            }
        };
        let mut t = 1.0;
        let mut moved = false;
        for _ in 0..MAX_HALVINGS {
            let mut candidate = theta.clone();
            for j in 0..free {
                candidate[j] += t * direction[j];
            }
            let cand_loglik = quasi_loglik(design, &candidate);
            if cand_loglik.is_finite() {
                let cand_grad = score(design, &candidate).rows(0, free).into_owned();
                let slack = 1e-12 * (1.0 + loglik.abs());
                if cand_loglik > loglik || (cand_loglik >= loglik - slack && max_norm(&cand_grad) < norm) {
                    theta = candidate;
                    loglik = cand_loglik;
                    grad = cand_grad;
                    moved = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if !moved {
            return Err(EconError::NoConvergence {
                iterations: iteration + 1,
                gradient_norm: norm,
            });
        }
    }
    let norm = max_norm(&grad);
    if norm < GRADIENT_TOLERANCE {
        Ok(Optimum {
            theta,
            loglik,
            gradient_norm: norm,
            iterations: MAX_ITERATIONS,
        })
    } else {
        Err(EconError::NoConvergence {
            iterations: MAX_ITERATIONS,
            gradient_norm: norm,
        })
    }
}

/// `b` from regressing the constant `Phi^-1(mean y)` on `x`, `g = 0`.
fn starting_values(design: &Design) -> Result<DVector<f64>> {
    let ybar = design.y.mean().clamp(1e-6, 1.0 - 1e-6);
    let target = Normal::standard().inverse_cdf(ybar);
    let beta = lstsq(&design.x, &DVector::from_element(design.n(), target), &design.names)?;
    let mut theta = DVector::zeros(parameter_count(design));
    theta.rows_mut(0, beta.len()).copy_from(&beta);
    Ok(theta)
}

fn finish(design: &Design, estimator: Estimator, options: FitOptions, opt: Optimum, free: usize) -> Result<FitResult> {
    let n = design.n();
    let theta = opt.theta.rows(0, free).into_owned();
    let neg_hess = -hessian(design, &opt.theta).view((0, 0), (free, free)).into_owned();
    let bread = neg_hess
        .clone()
        .try_inverse()
        .ok_or_else(|| EconError::Specification("information matrix is singular at the optimum".into()))?;
    let bread = symmetrize(bread);
    let (vcov, n_clusters) = match options.vcov {
        VcovKind::Classical => (bread, None),
        VcovKind::Robust | VcovKind::Cluster => {
            let scores = score_rows(design, &opt.theta).columns(0, free).into_owned();
            sandwich(&bread, &scores, design, options)
        }
    };
    let z_names: &[String] = if free > design.x.ncols() { &design.z_names } else { &[] };
    let coefficients = coefficients(&design.names, z_names, &theta, &vcov, Reference::Normal);
    let chi2 = wald_slopes(&design.names, &theta, &vcov);
    let (aic, bic) = information_criteria(opt.loglik, free, n);
    let residuals = &design.y - predict(design, &opt.theta);
    Ok(FitResult {
        estimator,
        options,
        coefficients,
        vcov,
        n_obs: n,
        n_clusters,
        r2: None,
        r2_adj: None,
        log_likelihood: opt.loglik,
        aic,
        bic,
        chi2,
        residuals,
        iterations: opt.iterations,
        gradient_norm: opt.gradient_norm,
    })
}

/// Fractional probit on the mean equation of `design`; any variance
/// regressors are ignored.
pub fn fit_fractional_probit(design: &Design, options: FitOptions) -> Result<FitResult> {
    let mean_only = Design {
        z: DMatrix::zeros(design.n(), 0),
        z_names: Vec::new(),
        ..design.clone()
    };
    fit_qmle(&mean_only, Estimator::FractionalProbit, options, false)
}

/// Heteroskedastic fractional probit. `design.z` must have at least one
/// column and no intercept.
pub fn fit_fhetprob(design: &Design, options: FitOptions) -> Result<FitResult> {
    if design.z.ncols() == 0 {
        return Err(EconError::Specification(
            "the heteroskedastic probit needs variance covariates (the tobs dummies)".into(),
        ));
    }
    let constant = (0..design.z.ncols()).any(|c| (0..design.n()).all(|i| design.z[(i, c)] == 1.0));
    if constant || design.z_names.iter().any(|n| n == "_cons") {
        return Err(EconError::Specification("the variance equation must not contain an intercept".into()));
    }
    fit_qmle(design, Estimator::Fhetprob, options, true)
}

/// Heteroskedastic fractional probit with every variance coefficient held at
/// zero. Only the mean block is estimated and reported.
pub fn fit_fhetprob_restricted(design: &Design, options: FitOptions) -> Result<FitResult> {
    fit_qmle(design, Estimator::Fhetprob, options, false)
}

fn fit_qmle(design: &Design, estimator: Estimator, options: FitOptions, free_variance: bool) -> Result<FitResult> {
    check_response(&design.y)?;
    let start = starting_values(design)?;
    let free = if free_variance { parameter_count(design) } else { design.x.ncols() };
    let opt = maximize(design, start, free)?;
    finish(design, estimator, options, opt, free)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tails() {
        assert_eq!(cdf(0.0), 0.5);
        assert!((cdf(1.959_963_984_540_054) - 0.975).abs() < 1e-15);
        let (ln_p, mills) = log_cdf_and_mills(-40.0);
        assert!(ln_p.is_finite() && ln_p < -800.0);
        assert!((mills - 40.0).abs() < 0.1);
        let (near, near_mills) = log_cdf_and_mills(-29.999);
        let (far, far_mills) = log_cdf_and_mills(-30.001);
        assert!((near - far).abs() < 0.1 && (near_mills - far_mills).abs() < 0.01);
    }

    #[test]
    fn rejects_responses_outside_unit_interval() {
        let n = 3;
        let d = Design::from_matrices(
            DVector::from_vec(vec![0.2, 1.2, 0.5]),
            DMatrix::from_element(n, 1, 1.0),
            vec!["_cons".into()],
            DMatrix::zeros(n, 0),
            vec![],
            vec![0, 1, 2],
        )
        .unwrap();
        let err = fit_fractional_probit(&d, FitOptions::default()).unwrap_err();
        assert!(matches!(err, EconError::ResponseOutOfRange { row: 1, .. }));
    }

    #[test]
    fn intercept_only_matches_the_mean() {
        let y = vec![0.1, 0.3, 0.2, 0.6];
        let d = Design::from_matrices(
            DVector::from_vec(y),
            DMatrix::from_element(4, 1, 1.0),
            vec!["_cons".into()],
            DMatrix::zeros(4, 0),
            vec![],
            vec![0, 1, 2, 3],
        )
        .unwrap();
        let fit = fit_fractional_probit(&d, FitOptions::default()).unwrap();
        assert!((cdf(fit.coefficients[0].estimate) - 0.3).abs() < 1e-12);
        assert!(fit.residuals.sum().abs() < 1e-12);
    }
}
