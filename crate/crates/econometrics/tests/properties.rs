use nalgebra::SymmetricEigen;
use powerkit_econometrics::simulate::SyntheticModel;
use powerkit_econometrics::*;
use proptest::prelude::*;

const PHI_ZERO: f64 = 0.398_942_280_401_432_7;

fn model() -> impl Strategy<Value = (SyntheticModel, u64)> {
    (
        -1.0..1.0f64,
        -1.0..1.0f64,
        -0.8..0.8f64,
        -0.6..0.6f64,
        -0.6..0.6f64,
        60usize..200,
        any::<u64>(),
    )
        .prop_map(|(b1, b2, b0, g1, g2, n, seed)| {
            let mut m = SyntheticModel::heteroskedastic([b1, b2, b0], [g1, g2]);
            m.n = n;
            m.cluster_size = 10;
            (m, seed)
        })
}

fn positive_semidefinite(fit: &FitResult) -> bool {
    let v = &fit.vcov;
    let symmetric = (v - v.transpose()).amax() == 0.0;
    let eig = SymmetricEigen::new(v.clone());
    symmetric && eig.eigenvalues.iter().all(|&e| e >= -1e-12 * v.amax())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn fits_are_well_formed((m, seed) in model()) {
        let d = m.fractional(seed, Some(15.0));
        for options in [FitOptions::default(), FitOptions::clustered()] {
            let fits = [fit_ols(&d, options), fit_fractional_probit(&d, options), fit_fhetprob(&d, options)];
            for fit in fits {
                let fit = fit.unwrap();
                prop_assert_eq!(fit.n_obs, d.n());
                prop_assert_eq!(fit.residuals.len(), d.n());
                prop_assert!(positive_semidefinite(&fit));
                let k = fit.k() as f64;
                prop_assert!((fit.aic - (-2.0 * fit.log_likelihood + 2.0 * k)).abs() < 1e-9);
                prop_assert!((fit.bic - (-2.0 * fit.log_likelihood + k * (d.n() as f64).ln())).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn probit_effects_are_bounded((m, seed) in model()) {
        let d = m.fractional(seed, Some(15.0));
        let fit = fit_fractional_probit(&d, FitOptions::default()).unwrap();
        let me = marginal_effects(&fit, &d, &["x1", "x2"], EffectAt::Average).unwrap();
        for (e, c) in me.iter().zip(&fit.coefficients) {
            prop_assert!(e.effect.abs() <= c.estimate.abs() * PHI_ZERO * (1.0 + 1e-12));
        }
    }

    #[test]
    fn least_squares_residuals_are_orthogonal((m, seed) in model(), sigma in 0.01..2.0f64) {
        let d = m.linear(seed, sigma);
        let fit = fit_ols(&d, FitOptions::default()).unwrap();
        let xe = d.x.transpose() * &fit.residuals;
        prop_assert!(xe.amax() <= 1e-10 * (1.0 + d.y.amax() * d.n() as f64));
    }
}
