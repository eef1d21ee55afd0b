use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::metrics::{ci_relative_bias, relative_bias};
use crate::error::{Error, Result};
use crate::inference::{run_mcmc, FitResult, McmcSettings};
use crate::model::{Family, ModelConfig, SurveyDataset};
use crate::rng::{derive_seed, poisson_draw, stream_rng};
use crate::survey::{simulate_counts, simulate_survey, SurveyDesign};

/// Largest fraction of failed simulations a scenario tolerates.
pub const MAX_FAILURE_RATE: f64 = 0.10;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PointEstimate {
    #[default]
    Mean,
    Median,
}

impl PointEstimate {
    pub fn of(self, fit: &FitResult) -> f64 {
        match self {
            Self::Mean => fit.total().mean,
            Self::Median => fit.total().median,
        }
    }
}

/// Triple Poisson generator. `total` pins T (G is then unrecorded);
/// otherwise G and T are drawn from the hierarchy, redrawn until T > 0 so
/// that relative bias is defined.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TpGenerator {
    pub lambda_g: f64,
    pub lambda_n: f64,
    pub alpha: f64,
    pub coverage: Vec<f64>,
    pub n_replicates: usize,
    pub family: Family,
    pub phi: Option<f64>,
    #[serde(default)]
    pub total: Option<u64>,
}

/// Line-transect survey; the true abundance is the number of animals
/// whose production sustains the standing stock of vestiges.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DsGenerator {
    pub design: SurveyDesign,
    pub delta_days: f64,
    pub lambda_per_day: f64,
}

impl DsGenerator {
    pub fn true_abundance(&self) -> f64 {
        self.design.n_vestiges as f64 / (self.delta_days * self.lambda_per_day)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Generator {
    Tp(TpGenerator),
    DsSurvey(DsGenerator),
}

const MAX_TRUTH_REDRAWS: usize = 10_000;

impl Generator {
    /// Simulates one dataset and its true abundance. The truth is drawn
    /// before the counts, so generators that differ only in their site
    /// layout share it under the same rng.
    pub fn generate<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<(SurveyDataset, f64)> {
        match self {
            Self::Tp(g) => {
                let total = match g.total {
                    Some(t) => t,
                    None => draw_positive_total(g.lambda_g, g.lambda_n, rng)?,
                };
                let data = simulate_counts(total, g.alpha, &g.coverage, g.n_replicates, g.family, g.phi, rng)?;
                Ok((data, total as f64))
            }
            Self::DsSurvey(g) => {
                let sim = simulate_survey(&g.design, rng)?;
                Ok((sim.to_dataset()?, g.true_abundance()))
            }
        }
    }
}

fn draw_positive_total<R: Rng + ?Sized>(lambda_g: f64, lambda_n: f64, rng: &mut R) -> Result<u64> {
    for _ in 0..MAX_TRUTH_REDRAWS {
        let g = poisson_draw(lambda_g, rng);
        let t = poisson_draw(g as f64 * lambda_n, rng);
        if t > 0 {
            return Ok(t);
        }
    }
    Err(Error::Config(format!(
        "lambda_G = {lambda_g}, lambda_N = {lambda_n} almost never produce animals"
    )))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSpec {
    pub label: String,
    pub generator: Generator,
    pub model_config: ModelConfig,
    pub n_simulations: usize,
    pub mcmc_settings: McmcSettings,
    /// Simulation `i` draws its data from stream `i` of this seed; fits
    /// are seeded from `mcmc_settings.seed`.
    pub data_seed: u64,
    #[serde(default)]
    pub point_estimate: PointEstimate,
    /// Free-form factor levels carried into the result (grid cells).
    #[serde(default)]
    pub factors: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimRecord {
    pub sim: usize,
    pub n_true: f64,
    /// Absent when the fit failed.
    pub n_hat: Option<f64>,
    pub cri_lower: Option<f64>,
    pub cri_upper: Option<f64>,
    pub covered: Option<bool>,
    pub relative_bias: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl SimRecord {
    pub fn success(sim: usize, n_true: f64, n_hat: f64, lower: f64, upper: f64) -> Result<Self> {
        Ok(Self {
            sim,
            n_true,
            n_hat: Some(n_hat),
            cri_lower: Some(lower),
            cri_upper: Some(upper),
            covered: Some(lower <= n_true && n_true <= upper),
            relative_bias: Some(relative_bias(n_hat, n_true)?),
            error: None,
        })
    }

    pub fn failure(sim: usize, n_true: f64, err: &Error) -> Self {
        Self {
            sim,
            n_true,
            n_hat: None,
            cri_lower: None,
            cri_upper: None,
            covered: None,
            relative_bias: None,
            error: Some(err.to_string()),
        }
    }

    pub fn is_ok(&self) -> bool {
        self.error.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioResult {
    pub label: String,
    #[serde(default)]
    pub factors: BTreeMap<String, String>,
    pub n_simulations: usize,
    pub n_failed: usize,
    pub mean_relative_bias: f64,
    /// Mean relative bias of the interval's lower bound.
    pub rel_bias_ci_lower: f64,
    pub rel_bias_ci_upper: f64,
    pub coverage_rate: f64,
    pub mean_interval_width: f64,
    pub records: Vec<SimRecord>,
}

impl ScenarioResult {
    /// Summarizes per-simulation records; more than 10% failures is an
    /// error.
    pub fn from_records(label: &str, factors: BTreeMap<String, String>, records: Vec<SimRecord>) -> Result<Self> {
        let n = records.len();
        if n == 0 {
            return Err(Error::Config(format!("scenario {label} has no simulations")));
        }
        let ok: Vec<&SimRecord> = records.iter().filter(|r| r.is_ok()).collect();
        let n_failed = n - ok.len();
        if n_failed as f64 > MAX_FAILURE_RATE * n as f64 || ok.is_empty() {
            let first = records.iter().find_map(|r| r.error.clone()).unwrap_or_default();
            return Err(Error::Estimation(format!(
                "scenario {label}: {n_failed} of {n} simulations failed (first: {first})"
            )));
        }
        let m = ok.len() as f64;
        let mean_of = |f: &dyn Fn(&SimRecord) -> f64| ok.iter().map(|r| f(r)).sum::<f64>() / m;
        let mut lower = 0.0;
        let mut upper = 0.0;
        for r in &ok {
            let (lo, hi) = ci_relative_bias(r.cri_lower.unwrap(), r.cri_upper.unwrap(), r.n_true)?;
            lower += lo;
            upper += hi;
        }
        Ok(Self {
            label: label.to_string(),
            factors,
            n_simulations: n,
            n_failed,
            mean_relative_bias: mean_of(&|r| r.relative_bias.unwrap()),
            rel_bias_ci_lower: lower / m,
            rel_bias_ci_upper: upper / m,
            coverage_rate: mean_of(&|r| f64::from(u8::from(r.covered.unwrap()))),
            mean_interval_width: mean_of(&|r| r.cri_upper.unwrap() - r.cri_lower.unwrap()),
            records,
        })
    }
}

/// Seed of the fit for simulation `sim`.
pub fn fit_seed(master: u64, sim: usize) -> u64 {
    derive_seed(master, sim as u64)
}

fn run_one(spec: &ScenarioSpec, sim: usize) -> Result<SimRecord> {
    let mut rng = stream_rng(spec.data_seed, sim as u64);
    let (data, n_true) = spec.generator.generate(&mut rng)?;
    let settings = spec
        .mcmc_settings
        .clone()
        .with_seed(fit_seed(spec.mcmc_settings.seed, sim));
    match run_mcmc(&data, &spec.model_config, &settings) {
        Ok(fit) => {
            let t = fit.total();
            SimRecord::success(sim, n_true, spec.point_estimate.of(&fit), t.q2_5, t.q97_5)
        }
        Err(e @ (Error::Estimation(_) | Error::Initialization { .. })) => {
            Ok(SimRecord::failure(sim, n_true, &e))
        }
        Err(e) => Err(e),
    }
}

/// Runs every simulation of a scenario (in parallel) and summarizes.
/// Deterministic given the scenario definition and its seeds.
pub fn run_scenario(spec: &ScenarioSpec) -> Result<ScenarioResult> {
    if spec.n_simulations == 0 {
        return Err(Error::Config(format!("scenario {} needs n_simulations >= 1", spec.label)));
    }
    spec.model_config.validate()?;
    spec.mcmc_settings.validate()?;
    let records = (0..spec.n_simulations)
        .into_par_iter()
        .map(|i| run_one(spec, i))
        .collect::<Result<Vec<_>>>()?;
    ScenarioResult::from_records(&spec.label, spec.factors.clone(), records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::PriorSpec;

    fn record(sim: usize, n_hat: f64, lo: f64, hi: f64) -> SimRecord {
        SimRecord::success(sim, 10.0, n_hat, lo, hi).unwrap()
    }

    #[test]
    fn summary_arithmetic() {
        let recs = vec![record(0, 12.0, 8.0, 15.0), record(1, 9.0, 11.0, 14.0)];
        let r = ScenarioResult::from_records("x", BTreeMap::new(), recs).unwrap();
        assert!((r.mean_relative_bias - 0.05).abs() < 1e-12);
        assert_eq!(r.coverage_rate, 0.5);
        assert!((r.rel_bias_ci_lower - (-0.2 + 0.1) / 2.0).abs() < 1e-12);
        assert!((r.rel_bias_ci_upper - 0.45).abs() < 1e-12);
        assert!((r.mean_interval_width - 5.0).abs() < 1e-12);
    }

    #[test]
    fn too_many_failures() {
        let err = Error::Estimation("boom".into());
        let mut recs: Vec<SimRecord> = (0..9).map(|i| record(i, 10.0, 9.0, 11.0)).collect();
        recs.push(SimRecord::failure(9, 10.0, &err));
        recs.push(SimRecord::failure(10, 10.0, &err));
        assert!(ScenarioResult::from_records("x", BTreeMap::new(), recs.clone()).is_err());
        recs.pop();
        let ok = ScenarioResult::from_records("x", BTreeMap::new(), recs).unwrap();
        assert_eq!(ok.n_failed, 1);
        assert_eq!(ok.n_simulations, 10);
    }

    #[test]
    fn truth_shared_across_layouts() {
        let gen = |sites: usize, reps: usize| {
            Generator::Tp(TpGenerator {
                lambda_g: 5.0,
                lambda_n: 5.0,
                alpha: 20.0,
                coverage: vec![0.01; sites],
                n_replicates: reps,
                family: Family::Poisson,
                phi: None,
                total: None,
            })
        };
        for s in 0..20 {
            let (_, a) = gen(10, 1).generate(&mut stream_rng(9, s)).unwrap();
            let (_, b) = gen(100, 1).generate(&mut stream_rng(9, s)).unwrap();
            let (_, c) = gen(10, 10).generate(&mut stream_rng(9, s)).unwrap();
            assert!(a > 0.0);
            assert_eq!(a, b);
            assert_eq!(a, c);
        }
    }

    #[test]
    fn scenario_deterministic() {
        let spec = ScenarioSpec {
            label: "tiny".into(),
            generator: Generator::Tp(TpGenerator {
                lambda_g: 5.0,
                lambda_n: 5.0,
                alpha: 20.0,
                coverage: vec![0.01; 10],
                n_replicates: 1,
                family: Family::Poisson,
                phi: None,
                total: None,
            }),
            model_config: ModelConfig::poisson(
                PriorSpec::gamma(3.0, 1.0),
                PriorSpec::gamma(3.0, 1.0),
                PriorSpec::fixed(20.0),
            ),
            n_simulations: 3,
            mcmc_settings: McmcSettings {
                n_chains: 2,
                n_iterations: 1_000,
                burn_in: 300,
                ..McmcSettings::default()
            },
            data_seed: 4,
            point_estimate: PointEstimate::Mean,
            factors: BTreeMap::new(),
        };
        let a = run_scenario(&spec).unwrap();
        let b = run_scenario(&spec).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.records.len(), 3);
        assert!((0.0..=1.0).contains(&a.coverage_rate));
    }
}
