//! Fits compared with values frozen from statsmodels and scipy
//! (`fixtures/make_fixtures.py`).

use nalgebra::{DMatrix, DVector};
use powerkit_econometrics::*;
use serde::Deserialize;
use serde_json::Value;

#[derive(Deserialize)]
struct Row {
    y: f64,
    x1: f64,
    x2: f64,
    d1: f64,
    cluster: usize,
}

fn fixture() -> (Design, Value) {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures");
    let mut reader = csv::Reader::from_path(format!("{dir}/data.csv")).unwrap();
    let rows: Vec<Row> = reader.deserialize().map(|r| r.unwrap()).collect();
    let n = rows.len();
    let design = Design::from_matrices(
        DVector::from_iterator(n, rows.iter().map(|r| r.y)),
        DMatrix::from_fn(n, 3, |i, j| [rows[i].x1, rows[i].x2, 1.0][j]),
        vec!["x1".into(), "x2".into(), "_cons".into()],
        DMatrix::from_fn(n, 1, |i, _| rows[i].d1),
        vec!["d1".into()],
        rows.iter().map(|r| r.cluster).collect(),
    )
    .unwrap();
    let expected = serde_json::from_str(&std::fs::read_to_string(format!("{dir}/expected.json")).unwrap()).unwrap();
    (design, expected)
}

fn numbers(v: &Value) -> Vec<f64> {
    v.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect()
}

fn close(got: &[f64], want: &[f64], rel: f64, what: &str) {
    assert_eq!(got.len(), want.len(), "{what}");
    for (g, w) in got.iter().zip(want) {
        assert!((g - w).abs() <= rel * w.abs().max(1e-3), "{what}: {g} vs {w}");
    }
}

fn estimates(fit: &FitResult) -> Vec<f64> {
    fit.coefficients.iter().map(|c| c.estimate).collect()
}

fn std_errors(fit: &FitResult) -> Vec<f64> {
    fit.coefficients.iter().map(|c| c.std_error).collect()
}

fn opts(vcov: VcovKind) -> FitOptions {
    FitOptions { vcov, small_sample: true }
}

#[test]
fn least_squares() {
    let (d, e) = fixture();
    let e = &e["ols"];
    let classical = fit_ols(&d, opts(VcovKind::Classical)).unwrap();
    close(&estimates(&classical), &numbers(&e["params"]), 1e-10, "params");
    close(&std_errors(&classical), &numbers(&e["se_classical"]), 1e-10, "classical");
    close(&std_errors(&fit_ols(&d, opts(VcovKind::Robust)).unwrap()), &numbers(&e["se_hc0"]), 1e-10, "hc0");
    close(&std_errors(&fit_ols(&d, opts(VcovKind::Cluster)).unwrap()), &numbers(&e["se_cluster"]), 1e-10, "cluster");
    close(&[classical.r2_adj.unwrap()], &[e["r2_adj"].as_f64().unwrap()], 1e-10, "r2_adj");
    close(&[classical.log_likelihood], &[e["llf"].as_f64().unwrap()], 1e-10, "llf");
    close(&[classical.aic, classical.bic], &[e["aic"].as_f64().unwrap(), e["bic"].as_f64().unwrap()], 1e-10, "ic");
}

#[test]
fn fractional_probit() {
    let (d, e) = fixture();
    let e = &e["glm"];
    let fit = fit_fractional_probit(&d, opts(VcovKind::Classical)).unwrap();
    close(&estimates(&fit), &numbers(&e["params"]), 1e-8, "params");
    close(&std_errors(&fit), &numbers(&e["se_classical"]), 1e-6, "classical");
    close(&[fit.log_likelihood], &[e["llf"].as_f64().unwrap()], 1e-10, "llf");
    let robust = fit_fractional_probit(&d, opts(VcovKind::Robust)).unwrap();
    close(&std_errors(&robust), &numbers(&e["se_hc0"]), 1e-6, "hc0");
    let cluster = fit_fractional_probit(&d, opts(VcovKind::Cluster)).unwrap();
    close(&std_errors(&cluster), &numbers(&e["se_cluster"]), 1e-6, "cluster");
    assert_eq!(cluster.n_clusters, Some(12));
}

#[test]
fn heteroskedastic_probit() {
    let (d, e) = fixture();
    let e = &e["fhetprob"];
    let fit = fit_fhetprob(&d, opts(VcovKind::Classical)).unwrap();
    close(&estimates(&fit), &numbers(&e["params"]), 1e-6, "params");
    close(&std_errors(&fit), &numbers(&e["se_classical"]), 1e-5, "classical");
    close(&[fit.log_likelihood], &[e["llf"].as_f64().unwrap()], 1e-10, "llf");
    let cluster = fit_fhetprob(&d, opts(VcovKind::Cluster)).unwrap();
    close(&std_errors(&cluster), &numbers(&e["se_cluster"]), 1e-5, "cluster");
    assert_eq!(fit.variance_coefficient("d1").unwrap().block, Block::LnSigma2);
}
