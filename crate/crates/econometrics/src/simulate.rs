//! Synthetic data with known parameters.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Beta, Distribution, LogNormal, Normal, Uniform};

use crate::design::Design;
use crate::panel::{BudgetObs, PanelDataset, PanelObs, PowerObs};
use crate::probit::cdf;

/// Members of the 1976-2012 panel and the first year each is observed.
pub const MEMBERSHIP: [(&str, u32); 27] = [
    ("Germany", 1976),
    ("France", 1976),
    ("Italy", 1976),
    ("United Kingdom", 1976),
    ("Belgium", 1976),
    ("Netherlands", 1976),
    ("Denmark", 1976),
    ("Ireland", 1976),
    ("Luxembourg", 1976),
    ("Greece", 1981),
    ("Spain", 1986),
    ("Portugal", 1986),
    ("Austria", 1995),
    ("Sweden", 1995),
    ("Finland", 1995),
    ("Poland", 2004),
    ("Czech Republic", 2004),
    ("Hungary", 2004),
    ("Slovakia", 2004),
    ("Lithuania", 2004),
    ("Latvia", 2004),
    ("Slovenia", 2004),
    ("Estonia", 2004),
    ("Cyprus", 2004),
    ("Malta", 2004),
    ("Romania", 2007),
    ("Bulgaria", 2007),
];

pub const FIRST_YEAR: u32 = 1976;
pub const LAST_YEAR: u32 = 2012;

/// `(country, year)` for every member-year of the panel, by year then
/// accession order.
pub fn member_years() -> Vec<(&'static str, u32)> {
    (FIRST_YEAR..=LAST_YEAR)
        .flat_map(|y| MEMBERSHIP.iter().filter(move |(_, e)| *e <= y).map(move |(c, _)| (*c, y)))
        .collect()
}

/// Synthetic budget covariates and shares.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BudgetSimulation {
    pub seed: u64,
    /// Slope of the latent index on power.
    pub power_effect: f64,
    /// Standard deviation of the multiplicative noise on the raw shares.
    pub noise: f64,
}

impl Default for BudgetSimulation {
    fn default() -> Self {
        BudgetSimulation {
            seed: 2012,
            power_effect: 4.0,
            noise: 0.1,
        }
    }
}

/// Budget rows whose shares rise with power. Raw shares
/// `Phi(-1.6 + power_effect p + 0.8 agri - 0.3 income)` with lognormal noise
/// are normalized to sum to one in each year.
pub fn simulate_budget(sim: &BudgetSimulation, power: &[PowerObs]) -> Vec<BudgetObs> {
    let mut rng = ChaCha8Rng::seed_from_u64(sim.seed);
    let agri_level = Uniform::new(0.02, 0.2).expect("valid range");
    let income_level = LogNormal::new(0.0, 0.3).expect("valid parameters");
    let noise = LogNormal::new(0.0, sim.noise.max(1e-12)).expect("valid parameters");
    let mut countries: Vec<&str> = power.iter().map(|p| p.country.as_str()).collect();
    countries.sort_unstable();
    countries.dedup();
    let profile: Vec<(f64, f64)> = countries
        .iter()
        .map(|_| (agri_level.sample(&mut rng), income_level.sample(&mut rng)))
        .collect();
    let mut rows: Vec<BudgetObs> = power
        .iter()
        .map(|p| {
            let c = countries.binary_search(&p.country.as_str()).expect("country listed");
            let trend = f64::from(p.year - FIRST_YEAR) / f64::from(LAST_YEAR - FIRST_YEAR);
            let agri = (profile[c].0 * (1.0 - 0.5 * trend) + rng.random_range(0.0..0.01)).min(1.0);
            let income = profile[c].1 * (1.0 + 0.2 * trend);
            let raw = cdf(-1.6 + sim.power_effect * p.p_ssi + 0.8 * agri - 0.3 * income);
            BudgetObs {
                country: p.country.clone(),
                year: p.year,
                exp: raw * noise.sample(&mut rng),
                exp_adj: raw * noise.sample(&mut rng),
                agri,
                income,
            }
        })
        .collect();
    normalize_by_year(&mut rows);
    rows
}

fn normalize_by_year(rows: &mut [BudgetObs]) {
    let mut totals: std::collections::BTreeMap<u32, (f64, f64)> = Default::default();
    for r in rows.iter() {
        let t = totals.entry(r.year).or_default();
        t.0 += r.exp;
        t.1 += r.exp_adj;
    }
    for r in rows.iter_mut() {
        let (e, a) = totals[&r.year];
        r.exp /= e;
        r.exp_adj /= a;
    }
}

/// Power shares proportional to a fixed size per country, renormalized each
/// year; the nucleolus-like column concentrates on the larger members.
pub fn simulate_power(seed: u64) -> Vec<PowerObs> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let size = LogNormal::new(0.0, 0.8).expect("valid parameters");
    let sizes: Vec<f64> = MEMBERSHIP.iter().map(|_| size.sample(&mut rng)).collect();
    let mut rows = Vec::new();
    for year in FIRST_YEAR..=LAST_YEAR {
        let members: Vec<usize> = (0..MEMBERSHIP.len()).filter(|&i| MEMBERSHIP[i].1 <= year).collect();
        let ssi_total: f64 = members.iter().map(|&i| sizes[i]).sum();
        let nucl_total: f64 = members.iter().map(|&i| sizes[i].powf(1.5)).sum();
        for &i in &members {
            rows.push(PowerObs {
                country: MEMBERSHIP[i].0.to_string(),
                year,
                p_ssi: sizes[i] / ssi_total,
                p_nucl: sizes[i].powf(1.5) / nucl_total,
            });
        }
    }
    rows
}

/// A complete synthetic panel of 575 member-years.
pub fn synthetic_panel(sim: &BudgetSimulation) -> PanelDataset {
    let power = simulate_power(sim.seed.wrapping_add(1));
    let budget = simulate_budget(sim, &power);
    let (obs, report) = PanelDataset::join(&budget, &power);
    debug_assert!(report.is_complete());
    PanelDataset::new(obs).expect("synthetic panel is valid")
}

/// Rows of a synthetic panel with explicit values, for tests that need
/// exact control over the response.
pub fn panel_with_response(panel: &PanelDataset, exp: impl Fn(&PanelObs) -> f64) -> Vec<PanelObs> {
    panel
        .obs()
        .iter()
        .map(|o| PanelObs {
            exp: exp(o),
            ..o.clone()
        })
        .collect()
}

/// Parameters of a synthetic regression design.
#[derive(Clone, Debug, PartialEq)]
pub struct SyntheticModel {
    /// Coefficients on `x1` (standard normal), `x2` (uniform) and `_cons`.
    pub beta: [f64; 3],
    /// Variance coefficients on `d1` (Bernoulli 0.3) and `d2` (Bernoulli 0.2);
    /// empty for homoskedastic models.
    pub gamma: Vec<f64>,
    pub n: usize,
    /// Observations per cluster.
    pub cluster_size: usize,
}

impl SyntheticModel {
    pub fn probit(beta: [f64; 3]) -> Self {
        SyntheticModel {
            beta,
            gamma: Vec::new(),
            n: 575,
            cluster_size: 23,
        }
    }

    pub fn heteroskedastic(beta: [f64; 3], gamma: [f64; 2]) -> Self {
        SyntheticModel {
            gamma: gamma.to_vec(),
            ..Self::probit(beta)
        }
    }

    fn regressors(&self, rng: &mut ChaCha8Rng) -> (DMatrix<f64>, DMatrix<f64>) {
        let normal = Normal::new(0.0, 1.0).expect("valid parameters");
        let x = DMatrix::from_fn(self.n, 3, |_, j| match j {
            0 => normal.sample(rng),
            1 => rng.random_range(0.0..1.0),
            _ => 1.0,
        });
        let z = DMatrix::from_fn(self.n, self.gamma.len(), |_, k| {
            let p = if k == 0 { 0.3 } else { 0.2 };
            f64::from(u8::from(rng.random_bool(p)))
        });
        (x, z)
    }

    fn design(&self, x: DMatrix<f64>, z: DMatrix<f64>, y: DVector<f64>) -> Design {
        let z_names = (1..=z.ncols()).map(|k| format!("d{k}")).collect();
        let clusters = (0..self.n).map(|i| i / self.cluster_size.max(1)).collect();
        Design::from_matrices(y, x, vec!["x1".into(), "x2".into(), "_cons".into()], z, z_names, clusters)
            .expect("consistent shapes")
    }

    /// Mean `Phi(x b / exp(z g))` for the given regressors.
    pub fn mean(&self, x: &DMatrix<f64>, z: &DMatrix<f64>) -> DVector<f64> {
        DVector::from_fn(self.n, |i, _| {
            let xb: f64 = (0..3).map(|j| x[(i, j)] * self.beta[j]).sum();
            let zg: f64 = (0..self.gamma.len()).map(|k| z[(i, k)] * self.gamma[k]).sum();
            cdf(xb / zg.exp())
        })
    }

    /// `y = x b + N(0, sigma^2)`.
    pub fn linear(&self, seed: u64, sigma: f64) -> Design {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x, z) = self.regressors(&mut rng);
        let noise = Normal::new(0.0, sigma).expect("valid parameters");
        let b = DVector::from_column_slice(&self.beta);
        let y = &x * b + DVector::from_fn(self.n, |_, _| noise.sample(&mut rng));
        self.design(x, z, y)
    }

    /// Fractional response drawn from a beta distribution with the probit
    /// mean and the given precision. `None` gives the mean itself.
    pub fn fractional(&self, seed: u64, precision: Option<f64>) -> Design {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x, z) = self.regressors(&mut rng);
        let mu = self.mean(&x, &z);
        let y = match precision {
            None => mu,
            Some(phi) => mu.map(|m| {
                let m = m.clamp(1e-9, 1.0 - 1e-9);
                Beta::new(m * phi, (1.0 - m) * phi).expect("positive shape").sample(&mut rng)
            }),
        };
        self.design(x, z, y)
    }
}

/// Monte-Carlo mean of one parameter and its standard error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Recovery {
    pub truth: f64,
    pub mean: f64,
    /// Standard deviation across replications over `sqrt(replications)`.
    pub mc_se: f64,
}

impl Recovery {
    /// Distance from the truth in Monte-Carlo standard errors.
    pub fn z(&self) -> f64 {
        (self.mean - self.truth) / self.mc_se
    }
}

/// Summarizes replicated estimates, one vector per replication.
pub fn recovery(truth: &[f64], estimates: &[Vec<f64>]) -> Vec<Recovery> {
    let r = estimates.len() as f64;
    truth
        .iter()
        .enumerate()
        .map(|(j, &t)| {
            let mean = estimates.iter().map(|e| e[j]).sum::<f64>() / r;
            let var = estimates.iter().map(|e| (e[j] - mean).powi(2)).sum::<f64>() / (r - 1.0);
            Recovery {
                truth: t,
                mean,
                mc_se: (var / r).sqrt(),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn member_years_match_the_accession_arithmetic() {
        let rows = member_years();
        assert_eq!(rows.len(), 575);
        let count = |c: &str| rows.iter().filter(|(x, _)| *x == c).count();
        assert_eq!(
            [count("Germany"), count("Greece"), count("Spain"), count("Austria"), count("Malta"), count("Bulgaria")],
            [37, 32, 27, 18, 9, 6]
        );
    }

    #[test]
    fn synthetic_panel_is_valid() {
        let panel = synthetic_panel(&BudgetSimulation::default());
        assert_eq!(panel.len(), 575);
        assert_eq!(panel.countries(), 27);
    }
}
