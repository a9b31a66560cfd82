//! Pooled least squares.

use nalgebra::{DMatrix, DVector};

use crate::design::{Design, Estimator};
use crate::error::{EconError, Result};
use crate::fit::{coefficients, information_criteria, sandwich, symmetrize, FitOptions, FitResult, Reference, VcovKind};

/// Relative size below which a diagonal entry of `R` marks a dependent column.
pub const RANK_TOLERANCE: f64 = 1e-10;

/// Upper-triangular factor and thin `Q` of `x`, with the first dependent
/// column reported by name.
pub(crate) fn qr_checked(x: &DMatrix<f64>, names: &[String]) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let (n, k) = x.shape();
    if n < k {
        return Err(EconError::Specification(format!("{n} observations for {k} regressors")));
    }
    let qr = x.clone().qr();
    let r = qr.r();
    let scale = (0..k).map(|j| r[(j, j)].abs()).fold(0.0, f64::max);
    if let Some(j) = (0..k).find(|&j| r[(j, j)].abs() <= RANK_TOLERANCE * scale) {
        return Err(EconError::RankDeficient(names[j].clone()));
    }
    Ok((qr.q(), r))
}

/// `(X'X)^-1` from the triangular factor.
fn xtx_inverse(r: &DMatrix<f64>) -> DMatrix<f64> {
    let k = r.nrows();
    let rinv = r
        .solve_upper_triangular(&DMatrix::identity(k, k))
        .expect("nonsingular after rank check");
    symmetrize(&rinv * rinv.transpose())
}

/// Least squares with the variance chosen in `options`. Clustered fits use
/// `G - 1` degrees of freedom for the `t` reference, others `n - k`.
pub fn fit_ols(design: &Design, options: FitOptions) -> Result<FitResult> {
    let (n, k) = design.x.shape();
    let (q, r) = qr_checked(&design.x, &design.names)?;
    let qty = q.transpose() * &design.y;
    let beta = r.solve_upper_triangular(&qty).expect("nonsingular after rank check");
    let fitted = &design.x * &beta;
    let residuals = &design.y - fitted;
    let ssr = residuals.norm_squared();
    let df = n as f64 - k as f64;
    let bread = xtx_inverse(&r);
    let (vcov, n_clusters) = match options.vcov {
        VcovKind::Classical => (&bread * (ssr / df), None),
        VcovKind::Robust | VcovKind::Cluster => {
            let scores = DMatrix::from_fn(n, k, |i, j| design.x[(i, j)] * residuals[i]);
            sandwich(&bread, &scores, design, options)
        }
    };
    let reference = match n_clusters {
        Some(g) => Reference::StudentT(g as f64 - 1.0),
        None => Reference::StudentT(df),
    };
    let coefficients = coefficients(&design.names, &[], &beta, &vcov, reference);

    let has_constant = design.column("_cons").is_some();
    let ybar = if has_constant { design.y.mean() } else { 0.0 };
    let sst: f64 = design.y.iter().map(|v| (v - ybar).powi(2)).sum();
    let r2 = 1.0 - ssr / sst;
    let dof_total = if has_constant { n as f64 - 1.0 } else { n as f64 };
    let r2_adj = 1.0 - (1.0 - r2) * dof_total / df;
    let nf = n as f64;
    let log_likelihood = -0.5 * nf * ((2.0 * std::f64::consts::PI).ln() + (ssr / nf).ln() + 1.0);
    let (aic, bic) = information_criteria(log_likelihood, k, n);
    let gradient = design.x.transpose() * &residuals;

    Ok(FitResult {
        estimator: Estimator::Ols,
        options,
        coefficients,
        vcov,
        n_obs: n,
        n_clusters,
        r2: Some(r2),
        r2_adj: Some(r2_adj),
        log_likelihood,
        aic,
        bic,
        chi2: None,
        residuals,
        iterations: 0,
        gradient_norm: crate::fit::max_norm(&gradient),
    })
}

/// Least-squares coefficients only.
pub fn lstsq(x: &DMatrix<f64>, y: &DVector<f64>, names: &[String]) -> Result<DVector<f64>> {
    let (q, r) = qr_checked(x, names)?;
    Ok(r.solve_upper_triangular(&(q.transpose() * y)).expect("nonsingular after rank check"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn design(x: DMatrix<f64>, y: Vec<f64>, names: &[&str]) -> Design {
        let n = y.len();
        Design::from_matrices(
            DVector::from_vec(y),
            x,
            names.iter().map(|s| s.to_string()).collect(),
            DMatrix::zeros(n, 0),
            vec![],
            (0..n).collect(),
        )
        .unwrap()
    }

    #[test]
    fn textbook_line() {
        // y = 1 + 2x + e with e = (1, -1, -1, 1)
        let x = DMatrix::from_row_slice(4, 2, &[0., 1., 1., 1., 2., 1., 3., 1.]);
        let y = vec![2.0, 2.0, 4.0, 8.0];
        let fit = fit_ols(&design(x, y, &["x", "_cons"]), FitOptions::default()).unwrap();
        // SSR 4, s^2 = 2, (X'X)^-1 slope entry 1/5, SST 24
        assert!((fit.coefficients[0].estimate - 2.0).abs() < 1e-12);
        assert!((fit.coefficients[1].estimate - 1.0).abs() < 1e-12);
        assert!((fit.coefficients[0].std_error - 0.4f64.sqrt()).abs() < 1e-12);
        assert!((fit.r2.unwrap() - (1.0 - 4.0 / 24.0)).abs() < 1e-12);
        assert!((fit.r2_adj.unwrap() - (1.0 - (4.0 / 24.0) * 3.0 / 2.0)).abs() < 1e-12);
    }

    #[test]
    fn names_the_dependent_column() {
        let x = DMatrix::from_row_slice(4, 3, &[0., 0., 1., 1., 2., 1., 2., 4., 1., 3., 6., 1.]);
        let err = fit_ols(&design(x, vec![1., 2., 3., 5.], &["a", "twice_a", "_cons"]), FitOptions::default()).unwrap_err();
        assert!(matches!(err, EconError::RankDeficient(ref c) if c == "twice_a"), "{err}");
    }
}
