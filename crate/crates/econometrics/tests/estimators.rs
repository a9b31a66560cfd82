use nalgebra::{DMatrix, DVector};
use powerkit_econometrics::probit::{self, cdf, quasi_loglik, score};
use powerkit_econometrics::simulate::{self, recovery, BudgetSimulation, SyntheticModel};
use powerkit_econometrics::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PHI_ZERO: f64 = 0.398_942_280_401_432_7;

fn estimates(fit: &FitResult) -> Vec<f64> {
    fit.coefficients.iter().map(|c| c.estimate).collect()
}

fn spec(power: PowerIndex, enlargement: bool, estimator: Estimator) -> ModelSpec {
    ModelSpec {
        dependent: Dependent::Exp,
        power,
        enlargement,
        estimator,
        cluster: true,
    }
}

fn panel() -> PanelDataset {
    simulate::synthetic_panel(&BudgetSimulation::default())
}

#[test]
fn design_columns() {
    let p = panel();
    let d = build_design(&p, &spec(PowerIndex::Ssi, false, Estimator::Ols)).unwrap();
    assert_eq!(d.names, ["p_ssi", "agri", "income", "_cons"]);
    assert_eq!(d.z.ncols(), 0);
    let d = build_design(&p, &spec(PowerIndex::Nucl, true, Estimator::Fhetprob)).unwrap();
    assert_eq!(d.x.ncols(), 19);
    assert_eq!(d.z_names, ["tobs32", "tobs27", "tobs18", "tobs9", "tobs6"]);
    assert_eq!(&d.names[3..5], ["p_nuclEU10", "p_nuclEU12"]);
    assert_eq!(d.cluster_count(), 27);
    let eu15 = d.column("EU15").unwrap();
    let years: Vec<u32> = p.obs().iter().zip(d.x.column(eu15).iter()).filter(|(_, &v)| v == 1.0).map(|(o, _)| o.year).collect();
    assert_eq!((years.iter().min(), years.iter().max()), (Some(&1995), Some(&2003)));
    let tobs6 = d.z.column(4).iter().filter(|&&v| v == 1.0).count();
    assert_eq!(tobs6, 12);
}

#[test]
fn empty_and_degenerate_panels_are_rejected() {
    assert!(matches!(PanelDataset::new(vec![]), Err(EconError::EmptyPanel)));
    let p = panel();
    let rows: Vec<PanelObs> = p.obs().iter().filter(|o| o.year < 1981).cloned().collect();
    let early = PanelDataset::new(rows).unwrap();
    let err = build_design(&early, &spec(PowerIndex::Ssi, true, Estimator::Ols)).unwrap_err();
    assert!(matches!(err, EconError::ZeroColumn(ref c) if c == "p_ssiEU10"), "{err}");
}

#[test]
fn noiseless_least_squares_is_exact() {
    let model = SyntheticModel::probit([0.7, -1.3, 0.25]);
    let mut d = model.linear(1, 1.0);
    d.y = &d.x * DVector::from_column_slice(&model.beta);
    let fit = fit_ols(&d, FitOptions::default()).unwrap();
    for (b, t) in estimates(&fit).iter().zip(model.beta) {
        assert!((b - t).abs() <= 1e-12, "{b} vs {t}");
    }
    assert!((fit.r2_adj.unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn residuals_are_orthogonal_to_regressors() {
    let d = SyntheticModel::probit([0.7, -1.3, 0.25]).linear(2, 0.5);
    let fit = fit_ols(&d, FitOptions::clustered()).unwrap();
    let xe = d.x.transpose() * &fit.residuals;
    assert!(xe.amax() <= 1e-10, "{xe}");
}

fn central_gradient(d: &Design, theta: &DVector<f64>) -> DVector<f64> {
    DVector::from_fn(theta.len(), |j, _| {
        let h = 1e-5 * theta[j].abs().max(1.0);
        let (mut up, mut down) = (theta.clone(), theta.clone());
        up[j] += h;
        down[j] -= h;
        (quasi_loglik(d, &up) - quasi_loglik(d, &down)) / (2.0 * h)
    })
}

fn relative_error(a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    (a - b).amax() / b.amax().max(1.0)
}

#[test]
fn analytic_gradients_match_central_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for case in 0..20 {
        let model = SyntheticModel::heteroskedastic([0.5, -0.4, 0.2], [0.6, -0.5]);
        let het = model.fractional(case, Some(20.0));
        let theta = DVector::from_fn(5, |_, _| rng.random_range(-1.0..1.0));
        let err = relative_error(&score(&het, &theta), &central_gradient(&het, &theta));
        assert!(err <= 1e-6, "heteroskedastic case {case}: {err:e}");
        let plain = Design {
            z: DMatrix::zeros(het.n(), 0),
            z_names: vec![],
            ..het
        };
        let theta = theta.rows(0, 3).into_owned();
        let err = relative_error(&score(&plain, &theta), &central_gradient(&plain, &theta));
        assert!(err <= 1e-6, "probit case {case}: {err:e}");
    }
}

#[test]
fn analytic_hessian_matches_differenced_gradient() {
    let d = SyntheticModel::heteroskedastic([0.5, -0.4, 0.2], [0.6, -0.5]).fractional(3, Some(20.0));
    let theta = DVector::from_vec(vec![0.3, -0.2, 0.1, 0.4, -0.3]);
    let h = probit::hessian(&d, &theta);
    for j in 0..5 {
        let e = 1e-6;
        let (mut up, mut down) = (theta.clone(), theta.clone());
        up[j] += e;
        down[j] -= e;
        let col = (score(&d, &up) - score(&d, &down)) / (2.0 * e);
        assert!(relative_error(&h.column(j).into_owned(), &col) < 1e-6, "column {j}");
    }
}

#[test]
fn probit_recovers_parameters_from_the_exact_mean() {
    let model = SyntheticModel::probit([0.6, -0.9, -0.4]);
    let d = model.fractional(4, None);
    let fit = fit_fractional_probit(&d, FitOptions::default()).unwrap();
    for (b, t) in estimates(&fit).iter().zip(model.beta) {
        assert!((b - t).abs() <= 1e-6, "{b} vs {t}");
    }
    let het = SyntheticModel::heteroskedastic([0.6, -0.9, -0.4], [0.5, -0.7]);
    let fit = fit_fhetprob(&het.fractional(5, None), FitOptions::default()).unwrap();
    let truth = [0.6, -0.9, -0.4, 0.5, -0.7];
    for (b, t) in estimates(&fit).iter().zip(truth) {
        assert!((b - t).abs() <= 1e-6, "{b} vs {t}");
    }
}

#[test]
fn zero_index_gives_half() {
    let d = SyntheticModel::probit([0.0, 0.0, 0.0]).fractional(6, None);
    assert!(d.y.iter().all(|&v| v == 0.5));
    let fit = fit_fractional_probit(&d, FitOptions::default()).unwrap();
    assert!(fitted_mean(&fit, &d).iter().all(|m| (m - 0.5).abs() < 1e-12));
    assert_eq!(cdf(0.0), 0.5);
}

#[test]
fn restricted_heteroskedastic_fit_is_the_probit_fit() {
    let d = SyntheticModel::heteroskedastic([0.5, -0.4, 0.2], [0.6, -0.5]).fractional(7, Some(25.0));
    for options in [FitOptions::default(), FitOptions::clustered()] {
        let restricted = fit_fhetprob_restricted(&d, options).unwrap();
        let glm = fit_fractional_probit(&d, options).unwrap();
        assert_eq!(estimates(&restricted), estimates(&glm));
        assert_eq!(restricted.vcov, glm.vcov);
        assert_eq!(restricted.log_likelihood, glm.log_likelihood);
    }
}

#[test]
fn singleton_clusters_without_scaling_equal_the_robust_sandwich() {
    let mut d = SyntheticModel::heteroskedastic([0.5, -0.4, 0.2], [0.6, -0.5]).fractional(8, Some(25.0));
    d.clusters = (0..d.n()).collect();
    let singletons = FitOptions {
        vcov: VcovKind::Cluster,
        small_sample: false,
    };
    let robust = FitOptions {
        vcov: VcovKind::Robust,
        small_sample: false,
    };
    let fits: [fn(&Design, FitOptions) -> Result<FitResult>; 3] = [fit_ols, fit_fractional_probit, fit_fhetprob];
    for fit in fits {
        let a = fit(&d, singletons).unwrap();
        let b = fit(&d, robust).unwrap();
        assert!((&a.vcov - &b.vcov).amax() <= 1e-15 * b.vcov.amax(), "{:?}", a.estimator);
    }
}

#[test]
fn information_criteria_follow_the_log_likelihood() {
    let d = SyntheticModel::probit([0.5, -0.4, 0.2]).fractional(9, Some(25.0));
    let n = d.n() as f64;
    for fit in [fit_ols(&d, FitOptions::default()).unwrap(), fit_fractional_probit(&d, FitOptions::default()).unwrap()] {
        assert_eq!(fit.k(), 3);
        assert!((fit.aic - (-2.0 * fit.log_likelihood + 6.0)).abs() < 1e-12);
        assert!((fit.bic - (-2.0 * fit.log_likelihood + 3.0 * n.ln())).abs() < 1e-9);
    }
}

#[test]
fn wald_statistic_covers_the_slopes() {
    let d = SyntheticModel::probit([0.5, -0.4, 0.2]).fractional(10, Some(25.0));
    let fit = fit_fractional_probit(&d, FitOptions::clustered()).unwrap();
    let chi2 = fit.chi2.unwrap();
    assert_eq!(chi2.df, 2);
    let b = DVector::from_vec(vec![fit.coefficients[0].estimate, fit.coefficients[1].estimate]);
    let v = fit.vcov.view((0, 0), (2, 2)).into_owned();
    let w = (b.transpose() * v.try_inverse().unwrap() * &b)[(0, 0)];
    assert!((chi2.statistic - w).abs() < 1e-9 * w);
    assert!(chi2.p_value < 0.01);
}

#[test]
fn nested_least_squares() {
    let p = panel();
    let with = build_design(&p, &spec(PowerIndex::Ssi, true, Estimator::Ols)).unwrap();
    let without = build_design(&p, &spec(PowerIndex::Ssi, false, Estimator::Ols)).unwrap();
    let keep: Vec<usize> = without.names.iter().map(|n| with.column(n).unwrap()).collect();
    let restricted = Design {
        x: with.x.select_columns(&keep),
        names: without.names.clone(),
        terms: without.terms.clone(),
        ..with.clone()
    };
    let a = fit_ols(&restricted, FitOptions::clustered()).unwrap();
    let b = fit_ols(&without, FitOptions::clustered()).unwrap();
    assert_eq!(estimates(&a), estimates(&b));
    assert_eq!(a.vcov, b.vcov);
}

#[test]
fn least_squares_effects_are_the_coefficients() {
    let p = panel();
    let (d, fit) = fit_spec(&p, &spec(PowerIndex::Ssi, false, Estimator::Ols)).unwrap();
    let me = marginal_effects(&fit, &d, &["p_ssi", "agri", "income"], EffectAt::Average).unwrap();
    for (m, c) in me.iter().zip(&fit.coefficients) {
        assert_eq!(m.name, c.name);
        assert_eq!(m.effect, c.estimate);
        assert!((m.std_error - c.std_error).abs() <= 1e-6 * c.std_error);
    }
    // With interactions the power effect adds the active interaction terms.
    let (d, fit) = fit_spec(&p, &spec(PowerIndex::Ssi, true, Estimator::Ols)).unwrap();
    let me = marginal_effects(&fit, &d, &["p_ssi"], EffectAt::Average).unwrap();
    let mut expected = fit.coefficient("p_ssi").unwrap().estimate;
    for k in [10, 12, 15, 25, 27] {
        let share = d.x.column(d.column(&format!("EU{k}")).unwrap()).mean();
        expected += fit.coefficient(&format!("p_ssiEU{k}")).unwrap().estimate * share;
    }
    assert!((me[0].effect - expected).abs() < 1e-12);
}

#[test]
fn probit_effect_at_zero_index() {
    let mut d = SyntheticModel::probit([0.0, 0.0, 0.0]).fractional(12, None);
    let fit = fit_fractional_probit(&d, FitOptions::default()).unwrap();
    // Any coefficient vector evaluated on an all-zero design has x b = 0.
    d.x.fill(0.0);
    let theta = [0.8, -0.3, 0.0];
    let mut fit = fit;
    for (c, t) in fit.coefficients.iter_mut().zip(theta) {
        c.estimate = t;
    }
    let me = marginal_effects(&fit, &d, &["x1", "x2"], EffectAt::Average).unwrap();
    assert!((me[0].effect - PHI_ZERO * 0.8).abs() < 1e-14);
    assert!((me[1].effect - PHI_ZERO * -0.3).abs() < 1e-14);
}

fn finite_difference_effect(fit: &FitResult, d: &Design, var: &str) -> f64 {
    let h = 1e-6;
    let base = fitted_mean(fit, d).mean();
    (fitted_mean(fit, &d.shifted(var, h)).mean() - base) / h
}

#[test]
fn probit_effects_match_finite_differences() {
    let p = panel();
    for (estimator, enlargement) in [
        (Estimator::FractionalProbit, false),
        (Estimator::FractionalProbit, true),
        (Estimator::Fhetprob, false),
        (Estimator::Fhetprob, true),
    ] {
        let (d, fit) = fit_spec(&p, &spec(PowerIndex::Ssi, enlargement, estimator)).unwrap();
        let vars = ["p_ssi", "agri", "income", "tobs9"];
        let vars = if estimator == Estimator::Fhetprob { &vars[..] } else { &vars[..3] };
        for m in marginal_effects(&fit, &d, vars, EffectAt::Average).unwrap() {
            let fd = finite_difference_effect(&fit, &d, &m.name);
            assert!((m.effect - fd).abs() <= 1e-5 * fd.abs().max(1e-3), "{estimator:?} {}: {} vs {fd}", m.name, m.effect);
        }
    }
}

#[test]
fn probit_effect_bounds() {
    let d = SyntheticModel::probit([0.9, -1.2, 0.3]).fractional(13, Some(10.0));
    let fit = fit_fractional_probit(&d, FitOptions::default()).unwrap();
    for at in [EffectAt::Average, EffectAt::Means] {
        let me = marginal_effects(&fit, &d, &["x1", "x2"], at).unwrap();
        for (m, c) in me.iter().zip(&fit.coefficients) {
            assert!(m.effect.abs() <= c.estimate.abs() * PHI_ZERO + 1e-15);
            assert_eq!(m.effect.signum(), c.estimate.signum());
        }
    }
    assert!(matches!(
        marginal_effects(&fit, &d, &["nope"], EffectAt::Average),
        Err(EconError::UnknownCoefficient(ref v)) if v == "nope"
    ));
}

#[test]
fn heteroskedastic_probit_needs_variance_covariates() {
    let d = SyntheticModel::probit([0.5, 0.1, 0.0]).fractional(14, Some(10.0));
    assert!(matches!(fit_fhetprob(&d, FitOptions::default()), Err(EconError::Specification(_))));
}

#[test]
fn monte_carlo_recovery() {
    let model = SyntheticModel::probit([0.5, -0.8, 0.3]);
    let ols: Vec<Vec<f64>> = (0..200)
        .map(|r| estimates(&fit_ols(&model.linear(1000 + r, 0.5), FitOptions::default()).unwrap()))
        .collect();
    let glm: Vec<Vec<f64>> = (0..200)
        .map(|r| estimates(&fit_fractional_probit(&model.fractional(2000 + r, Some(20.0)), FitOptions::default()).unwrap()))
        .collect();
    let het = SyntheticModel::heteroskedastic([0.5, -0.8, 0.3], [0.4, -0.3]);
    let fhet: Vec<Vec<f64>> = (0..200)
        .map(|r| estimates(&fit_fhetprob(&het.fractional(3000 + r, Some(20.0)), FitOptions::default()).unwrap()))
        .collect();
    for (label, truth, est) in [
        ("ols", vec![0.5, -0.8, 0.3], &ols),
        ("glm", vec![0.5, -0.8, 0.3], &glm),
        ("fhetprob", vec![0.5, -0.8, 0.3, 0.4, -0.3], &fhet),
    ] {
        for r in recovery(&truth, est) {
            assert!(r.z().abs() <= 4.0, "{label}: {r:?}");
        }
    }
}

#[test]
fn power_raises_the_share_under_every_estimator() {
    let p = panel();
    for (estimator, enlargement) in [
        (Estimator::Ols, false),
        (Estimator::Ols, true),
        (Estimator::FractionalProbit, false),
        (Estimator::Fhetprob, false),
    ] {
        let (d, fit) = fit_spec(&p, &spec(PowerIndex::Ssi, enlargement, estimator)).unwrap();
        let me = marginal_effects(&fit, &d, &["p_ssi"], EffectAt::Average).unwrap();
        assert!(me[0].effect > 0.0 && me[0].p_value < 0.05, "{estimator:?} {enlargement}: {:?}", me[0]);
        if !enlargement {
            let c = fit.coefficient("p_ssi").unwrap();
            assert!(c.estimate > 0.0 && c.p_value < 0.05, "{estimator:?}: {c:?}");
        }
    }
}

#[test]
fn panel_round_trip() {
    let p = panel();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("panel.csv");
    p.write_csv(&path).unwrap();
    let back = PanelDataset::read_csv(&path).unwrap();
    assert_eq!(back.obs(), p.obs());
    let header = std::fs::read_to_string(&path).unwrap();
    assert!(header.starts_with("country,year,exp,exp_adj,p_ssi,p_nucl,agri,income,EU10,EU12,EU15,EU25,EU27,tobs32,"));
}
