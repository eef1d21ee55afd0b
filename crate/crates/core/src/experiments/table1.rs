use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::scenario::{
    run_scenario, DsGenerator, Generator, PointEstimate, ScenarioResult, ScenarioSpec, SimRecord,
};
use crate::error::{Error, Result};
use crate::inference::McmcSettings;
use crate::model::{ModelConfig, PriorSpec};
use crate::rng::{derive_seed, stream_rng};
use crate::survey::{ds_abundance, simulate_survey, SurveyDesign};

/// A distance-sampling fit with assumed production rate λ and decay time δ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DsModel {
    pub label: String,
    pub lambda_per_day: f64,
    pub delta_days: f64,
}

impl DsModel {
    fn new(label: &str, lambda_per_day: f64, delta_days: f64) -> Self {
        Self {
            label: label.into(),
            lambda_per_day,
            delta_days,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table1Options {
    pub design: SurveyDesign,
    /// True decay time and production rate behind the simulated surveys.
    pub true_delta_days: f64,
    pub true_lambda_per_day: f64,
    pub ds_models: Vec<DsModel>,
    pub informative_lambda_n: PriorSpec,
    pub informative_lambda_g: PriorSpec,
    pub flat: PriorSpec,
    pub prior_alpha: PriorSpec,
    pub point_estimate: PointEstimate,
}

impl Default for Table1Options {
    fn default() -> Self {
        Self {
            design: SurveyDesign::default(),
            true_delta_days: 10.0,
            true_lambda_per_day: 15.0,
            ds_models: vec![
                DsModel::new("DS1", 15.0, 10.0),
                DsModel::new("DS2", 16.0, 10.0),
                DsModel::new("DS3", 15.0, 11.0),
                DsModel::new("DS4", 16.0, 11.0),
                DsModel::new("DS5", 17.0, 12.0),
                DsModel::new("DS6", 18.0, 13.0),
                DsModel::new("DS7", 19.0, 14.0),
            ],
            informative_lambda_n: PriorSpec::gamma(5.0, 1.0),
            informative_lambda_g: PriorSpec::gamma(10.0, 1.0),
            flat: PriorSpec::gamma(0.01, 0.01),
            prior_alpha: PriorSpec::uniform(10.0, 10_000.0),
            point_estimate: PointEstimate::Mean,
        }
    }
}

impl Table1Options {
    /// TP1–TP4: informative/flat λ_N crossed with informative/flat λ_G.
    pub fn tp_models(&self) -> Vec<(String, ModelConfig)> {
        let (inf_n, inf_g, flat) = (self.informative_lambda_n, self.informative_lambda_g, self.flat);
        [
            ("TP1", inf_n, inf_g),
            ("TP2", inf_n, flat),
            ("TP3", flat, inf_g),
            ("TP4", flat, flat),
        ]
        .into_iter()
        .map(|(label, n, g)| (label.to_string(), ModelConfig::poisson(g, n, self.prior_alpha)))
        .collect()
    }

    fn generator(&self) -> DsGenerator {
        DsGenerator {
            design: self.design.clone(),
            delta_days: self.true_delta_days,
            lambda_per_day: self.true_lambda_per_day,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table1Result {
    pub n_true: f64,
    pub tp: Vec<ScenarioResult>,
    pub ds: Vec<ScenarioResult>,
}

impl Table1Result {
    pub fn all(&self) -> impl Iterator<Item = &ScenarioResult> {
        self.tp.iter().chain(&self.ds)
    }

    pub fn get(&self, label: &str) -> Option<&ScenarioResult> {
        self.all().find(|r| r.label == label)
    }
}

/// Stream tags under the master seed.
const DATA_STREAM: u64 = 0xDA7A;

/// Simulates `n_simulations` surveys and fits every TP and DS model to each
/// one. All models see the same surveys.
pub fn run_table1(n_simulations: usize, settings: &McmcSettings, opts: &Table1Options) -> Result<Table1Result> {
    if n_simulations == 0 {
        return Err(Error::Config("table 1 needs at least one simulation".into()));
    }
    let data_seed = derive_seed(settings.seed, DATA_STREAM);
    let generator = opts.generator();
    let n_true = generator.true_abundance();

    let tp = opts
        .tp_models()
        .into_iter()
        .enumerate()
        .map(|(k, (label, config))| {
            run_scenario(&ScenarioSpec {
                label,
                generator: Generator::DsSurvey(generator.clone()),
                model_config: config,
                n_simulations,
                mcmc_settings: settings.clone().with_seed(derive_seed(settings.seed, k as u64 + 1)),
                data_seed,
                point_estimate: opts.point_estimate,
                factors: BTreeMap::new(),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    // the same surveys again, for the DS models
    let surveys = (0..n_simulations)
        .into_par_iter()
        .map(|i| simulate_survey(&opts.design, &mut stream_rng(data_seed, i as u64)))
        .collect::<Result<Vec<_>>>()?;
    let ds = opts
        .ds_models
        .iter()
        .map(|m| {
            let records = surveys
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    match ds_abundance(&s.distances, opts.design.area_km2(), m.delta_days, m.lambda_per_day) {
                        Ok(e) => SimRecord::success(i, n_true, e.abundance, e.ci_lower, e.ci_upper),
                        Err(e @ Error::Estimation(_)) => Ok(SimRecord::failure(i, n_true, &e)),
                        Err(e) => Err(e),
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            let factors = BTreeMap::from([
                ("lambda".to_string(), m.lambda_per_day.to_string()),
                ("delta".to_string(), m.delta_days.to_string()),
            ]);
            ScenarioResult::from_records(&m.label, factors, records)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Table1Result { n_true, tp, ds })
}
