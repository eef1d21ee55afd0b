use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::scenario::{run_scenario, Generator, PointEstimate, ScenarioResult, ScenarioSpec, TpGenerator};
use crate::error::Result;
use crate::inference::McmcSettings;
use crate::model::{Family, ModelConfig, PriorSpec};
use crate::rng::derive_seed;

/// What the fits know about α: the truth, a wrong value, or only a
/// Uniform range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphaStudyOptions {
    pub alpha_true: f64,
    pub alpha_wrong: f64,
    pub total: u64,
    pub coverage: Vec<f64>,
    pub n_replicates: usize,
    pub n_simulations: usize,
    pub prior_lambda_g: PriorSpec,
    pub prior_lambda_n: PriorSpec,
    pub prior_alpha_uniform: PriorSpec,
    pub point_estimate: PointEstimate,
}

impl Default for AlphaStudyOptions {
    fn default() -> Self {
        Self {
            alpha_true: 35.0,
            alpha_wrong: 45.0,
            total: 86,
            coverage: vec![0.01; 10],
            n_replicates: 1,
            n_simulations: 50,
            prior_lambda_g: PriorSpec::gamma(10.0, 1.0),
            prior_lambda_n: PriorSpec::gamma(5.0, 1.0),
            prior_alpha_uniform: PriorSpec::uniform(10.0, 10_000.0),
            point_estimate: PointEstimate::Mean,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphaStudyResult {
    pub fixed_correct: ScenarioResult,
    pub fixed_wrong: ScenarioResult,
    pub uniform: ScenarioResult,
}

impl AlphaStudyResult {
    pub fn all(&self) -> [&ScenarioResult; 3] {
        [&self.fixed_correct, &self.fixed_wrong, &self.uniform]
    }
}

/// Fits the same datasets (known T, known α) three times, varying only how
/// α enters the model.
pub fn run_alpha_study(settings: &McmcSettings, opts: &AlphaStudyOptions) -> Result<AlphaStudyResult> {
    let generator = Generator::Tp(TpGenerator {
        lambda_g: 1.0,
        lambda_n: 1.0,
        alpha: opts.alpha_true,
        coverage: opts.coverage.clone(),
        n_replicates: opts.n_replicates,
        family: Family::Poisson,
        phi: None,
        total: Some(opts.total),
    });
    let data_seed = derive_seed(settings.seed, 0xA1FA);
    let run = |k: u64, label: &str, alpha: PriorSpec| {
        run_scenario(&ScenarioSpec {
            label: label.into(),
            generator: generator.clone(),
            model_config: ModelConfig::poisson(opts.prior_lambda_g, opts.prior_lambda_n, alpha),
            n_simulations: opts.n_simulations,
            mcmc_settings: settings.clone().with_seed(derive_seed(settings.seed, k)),
            data_seed,
            point_estimate: opts.point_estimate,
            factors: BTreeMap::from([("alpha".to_string(), label.to_string())]),
        })
    };
    Ok(AlphaStudyResult {
        fixed_correct: run(1, "alpha_fixed_correct", PriorSpec::fixed(opts.alpha_true))?,
        fixed_wrong: run(2, "alpha_fixed_wrong", PriorSpec::fixed(opts.alpha_wrong))?,
        uniform: run(3, "alpha_uniform", opts.prior_alpha_uniform)?,
    })
}
