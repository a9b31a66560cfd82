//! Fitted models and their variance estimates.

use nalgebra::{DMatrix, DVector};
use statrs::distribution::{ChiSquared, ContinuousCDF, Normal, StudentsT};

use crate::design::{Design, Estimator};

/// Variance estimator.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum VcovKind {
    /// `s^2 (X'X)^-1` for least squares, the inverse observed information
    /// for quasi-likelihood fits.
    #[default]
    Classical,
    /// Heteroskedasticity-robust sandwich without small-sample scaling (HC0).
    Robust,
    /// Sandwich over clusters, scaled by `G/(G-1) (n-1)/(n-k)` unless
    /// `small_sample` is off.
    Cluster,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FitOptions {
    pub vcov: VcovKind,
    pub small_sample: bool,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            vcov: VcovKind::Classical,
            small_sample: true,
        }
    }
}

impl FitOptions {
    pub fn clustered() -> Self {
        FitOptions {
            vcov: VcovKind::Cluster,
            small_sample: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Block {
    Mean,
    /// Variance equation, reported as `lnsigma2`.
    LnSigma2,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Coefficient {
    pub name: String,
    pub block: Block,
    pub estimate: f64,
    pub std_error: f64,
    /// `t` for least squares, `z` otherwise.
    pub statistic: f64,
    pub p_value: f64,
}

impl Coefficient {
    pub fn stars(&self) -> &'static str {
        stars(self.p_value)
    }
}

/// `**` below 0.01, `*` below 0.05, `+` below 0.10.
pub fn stars(p: f64) -> &'static str {
    if p < 0.01 {
        "**"
    } else if p < 0.05 {
        "*"
    } else if p < 0.10 {
        "+"
    } else {
        ""
    }
}

/// Joint Wald test that every mean-equation slope is zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WaldTest {
    pub statistic: f64,
    pub df: usize,
    pub p_value: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FitResult {
    pub estimator: Estimator,
    pub options: FitOptions,
    pub coefficients: Vec<Coefficient>,
    pub vcov: DMatrix<f64>,
    pub n_obs: usize,
    pub n_clusters: Option<usize>,
    pub r2: Option<f64>,
    pub r2_adj: Option<f64>,
    /// Gaussian log-likelihood for least squares, Bernoulli
    /// quasi-log-likelihood for the fractional models.
    pub log_likelihood: f64,
    pub aic: f64,
    pub bic: f64,
    pub chi2: Option<WaldTest>,
    /// `y - fitted mean`.
    pub residuals: DVector<f64>,
    pub iterations: usize,
    pub gradient_norm: f64,
}

impl FitResult {
    pub fn coefficient(&self, name: &str) -> Option<&Coefficient> {
        self.coefficients.iter().find(|c| c.name == name && c.block == Block::Mean)
    }

    pub fn variance_coefficient(&self, name: &str) -> Option<&Coefficient> {
        self.coefficients.iter().find(|c| c.name == name && c.block == Block::LnSigma2)
    }

    /// All estimates, mean block first.
    pub fn theta(&self) -> DVector<f64> {
        DVector::from_iterator(self.coefficients.len(), self.coefficients.iter().map(|c| c.estimate))
    }

    pub fn k(&self) -> usize {
        self.coefficients.len()
    }
}

pub(crate) fn max_norm(v: &DVector<f64>) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// `bread * meat * bread` with the meat summed over clusters or
/// observations; `scores` has one row per observation.
pub(crate) fn sandwich(
    bread: &DMatrix<f64>,
    scores: &DMatrix<f64>,
    design: &Design,
    options: FitOptions,
) -> (DMatrix<f64>, Option<usize>) {
    let (n, k) = scores.shape();
    let (meat, groups) = match options.vcov {
        VcovKind::Cluster => {
            let g = design.cluster_count();
            let mut ids = design.clusters.clone();
            ids.sort_unstable();
            ids.dedup();
            let mut sums = DMatrix::<f64>::zeros(g, k);
            for i in 0..n {
                let row = ids.binary_search(&design.clusters[i]).expect("cluster listed");
                for j in 0..k {
                    sums[(row, j)] += scores[(i, j)];
                }
            }
            (sums.transpose() * sums, Some(g))
        }
        _ => (scores.transpose() * scores, None),
    };
    let mut v = bread * meat * bread;
    if let (Some(g), true) = (groups, options.small_sample) {
        let (gf, nf, kf) = (g as f64, n as f64, k as f64);
        v *= gf / (gf - 1.0) * (nf - 1.0) / (nf - kf);
    }
    (symmetrize(v), groups)
}

pub(crate) fn symmetrize(m: DMatrix<f64>) -> DMatrix<f64> {
    (&m + m.transpose()) * 0.5
}

pub(crate) enum Reference {
    StudentT(f64),
    Normal,
}

pub(crate) fn coefficients(
    names: &[String],
    z_names: &[String],
    theta: &DVector<f64>,
    vcov: &DMatrix<f64>,
    reference: Reference,
) -> Vec<Coefficient> {
    let normal = Normal::standard();
    let t = match reference {
        Reference::StudentT(df) => Some(StudentsT::new(0.0, 1.0, df).expect("positive degrees of freedom")),
        Reference::Normal => None,
    };
    names
        .iter()
        .map(|n| (n, Block::Mean))
        .chain(z_names.iter().map(|n| (n, Block::LnSigma2)))
        .enumerate()
        .map(|(j, (name, block))| {
            let se = vcov[(j, j)].max(0.0).sqrt();
            let statistic = theta[j] / se;
            let tail = match &t {
                Some(t) => t.cdf(-statistic.abs()),
                None => normal.cdf(-statistic.abs()),
            };
            Coefficient {
                name: name.clone(),
                block,
                estimate: theta[j],
                std_error: se,
                statistic,
                p_value: 2.0 * tail,
            }
        })
        .collect()
}

/// Wald test over the mean-equation slopes (everything but `_cons` in the
/// first `names.len()` parameters).
pub(crate) fn wald_slopes(names: &[String], theta: &DVector<f64>, vcov: &DMatrix<f64>) -> Option<WaldTest> {
    let idx: Vec<usize> = (0..names.len()).filter(|&j| names[j] != "_cons").collect();
    if idx.is_empty() {
        return None;
    }
    let b = DVector::from_iterator(idx.len(), idx.iter().map(|&j| theta[j]));
    let v = DMatrix::from_fn(idx.len(), idx.len(), |a, c| vcov[(idx[a], idx[c])]);
    let inv = v.try_inverse()?;
    let statistic = (b.transpose() * inv * &b)[(0, 0)];
    let df = idx.len();
    let p_value = 1.0 - ChiSquared::new(df as f64).ok()?.cdf(statistic);
    Some(WaldTest { statistic, df, p_value })
}

pub(crate) fn information_criteria(log_likelihood: f64, k: usize, n: usize) -> (f64, f64) {
    let k = k as f64;
    (-2.0 * log_likelihood + 2.0 * k, -2.0 * log_likelihood + k * (n as f64).ln())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stars_thresholds() {
        assert_eq!(stars(0.009), "**");
        assert_eq!(stars(0.01), "*");
        assert_eq!(stars(0.049), "*");
        assert_eq!(stars(0.05), "+");
        assert_eq!(stars(0.0999), "+");
        assert_eq!(stars(0.1), "");
    }

    #[test]
    fn information_criteria_by_hand() {
        // three parameters, log-likelihood -10, 20 observations
        let (aic, bic) = information_criteria(-10.0, 3, 20);
        assert_eq!(aic, 26.0);
        assert!((bic - (20.0 + 3.0 * 20f64.ln())).abs() < 1e-12);
        assert!((bic - 28.987_196_820_661_97).abs() < 1e-9);
    }
}
