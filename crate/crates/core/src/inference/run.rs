use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::diagnostics::{summarize, ParamSummary};
use super::dic::{compute_dic, Dic};
use super::kernels::Sampler;
use super::settings::McmcSettings;
use crate::error::{Error, Result};
use crate::model::{log_posterior, Family, LatentState, ModelConfig, SurveyDataset};
use crate::rng::{derive_seed, poisson_draw, SimRng};

/// Parameter keys used in chains and summaries.
pub mod param {
    pub const G: &str = "G";
    pub const T: &str = "T";
    pub const LAMBDA_G: &str = "lambda_G";
    pub const LAMBDA_N: &str = "lambda_N";
    pub const ALPHA: &str = "alpha";
    pub const PHI: &str = "phi";
}

/// Retained draws: parameter → chain → draws.
pub type Chains = BTreeMap<String, Vec<Vec<f64>>>;

const MAX_INIT_ATTEMPTS: usize = 100;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FitResult {
    pub family: Family,
    pub summaries: BTreeMap<String, ParamSummary>,
    pub chains: Chains,
    pub dic: f64,
    pub dbar: f64,
    pub p_d: f64,
    /// Post-burn-in acceptance per kernel, averaged over chains.
    pub acceptance_rates: BTreeMap<String, f64>,
    pub settings: McmcSettings,
}

impl FitResult {
    pub fn summary(&self, name: &str) -> Option<&ParamSummary> {
        self.summaries.get(name)
    }

    /// Posterior summary of total abundance.
    pub fn total(&self) -> &ParamSummary {
        &self.summaries[param::T]
    }

    pub fn dic_parts(&self) -> Dic {
        Dic {
            dbar: self.dbar,
            p_d: self.p_d,
            dic: self.dic,
        }
    }
}

/// One chain's output.
#[derive(Debug, Clone)]
pub struct ChainRun {
    pub draws: Vec<LatentState>,
    pub acceptance: Vec<(&'static str, f64)>,
}

/// Deterministic starting point from the prior means; see [`initial_state`].
fn prior_mean_state(config: &ModelConfig) -> LatentState {
    let lambda_g = config.prior_lambda_g.mean();
    let lambda_n = config.prior_lambda_n.mean();
    let groups = (lambda_g.ceil() as u64).max(1);
    let total = (groups as f64 * lambda_n).round() as u64;
    let phi = config.prior_phi.map(|p| match p.fixed_value() {
        Some(v) => v,
        None if p.contains(1.0) => 1.0,
        None => p.mean(),
    });
    LatentState {
        groups,
        total,
        lambda_g,
        lambda_n,
        alpha: config.prior_alpha.mean(),
        phi,
    }
}

/// Starts at the prior means; if that point has zero posterior density,
/// redraws the hyperparameters and latent counts from the prior (up to 100
/// times).
pub fn initial_state<R: Rng + ?Sized>(
    data: &SurveyDataset,
    config: &ModelConfig,
    rng: &mut R,
) -> Result<LatentState> {
    let mut state = prior_mean_state(config);
    for _ in 0..MAX_INIT_ATTEMPTS {
        if log_posterior(&state, data, config)?.is_finite() {
            return Ok(state);
        }
        let lambda_g = config.prior_lambda_g.sample(rng);
        let lambda_n = config.prior_lambda_n.sample(rng);
        let groups = 1 + poisson_draw(lambda_g, rng);
        let total = 1 + poisson_draw(groups as f64 * lambda_n, rng);
        state = LatentState {
            groups,
            total,
            lambda_g,
            lambda_n,
            alpha: config.prior_alpha.sample(rng),
            phi: config.prior_phi.map(|p| p.sample(rng)),
        };
    }
    if log_posterior(&state, data, config)?.is_finite() {
        return Ok(state);
    }
    Err(Error::Initialization {
        attempts: MAX_INIT_ATTEMPTS,
    })
}

/// Runs one chain from its own seed. Adaptation only touches burn-in.
pub fn run_chain(
    data: &SurveyDataset,
    config: &ModelConfig,
    settings: &McmcSettings,
    chain_seed: u64,
) -> Result<ChainRun> {
    use rand::SeedableRng;
    let mut rng = SimRng::seed_from_u64(chain_seed);
    let mut sampler = Sampler::new(data, config, settings)?;
    let mut state = initial_state(data, config, &mut rng)?;
    let mut draws = Vec::with_capacity(settings.kept_per_chain());
    for it in 0..settings.n_iterations {
        if it == settings.burn_in {
            sampler.start_keeping();
        }
        sampler.sweep(&mut state, &mut rng)?;
        if it < settings.burn_in {
            if settings.adapt && (it + 1) % settings.adapt_window == 0 {
                sampler.end_adapt_window();
            }
        } else if (it - settings.burn_in) % settings.thin == 0 {
            draws.push(state.clone());
        }
    }
    Ok(ChainRun {
        draws,
        acceptance: sampler.acceptance_rates(),
    })
}

/// Seed of chain `index` under master `seed`.
pub fn chain_seed(seed: u64, index: usize) -> u64 {
    derive_seed(seed, index as u64)
}

/// Runs `n_chains` independent chains (in parallel), then summarizes the
/// pooled draws and computes split-R̂, ESS and DIC. Output depends only on
/// the inputs and `settings.seed`.
pub fn run_mcmc(data: &SurveyDataset, config: &ModelConfig, settings: &McmcSettings) -> Result<FitResult> {
    let seeds: Vec<u64> = (0..settings.n_chains)
        .map(|i| chain_seed(settings.seed, i))
        .collect();
    run_mcmc_with_seeds(data, config, settings, &seeds)
}

/// As [`run_mcmc`] with explicit per-chain seeds (`settings.n_chains` is
/// ignored).
pub fn run_mcmc_with_seeds(
    data: &SurveyDataset,
    config: &ModelConfig,
    settings: &McmcSettings,
    seeds: &[u64],
) -> Result<FitResult> {
    config.validate()?;
    settings.validate()?;
    if seeds.is_empty() {
        return Err(Error::Config("need at least one chain seed".into()));
    }
    let runs: Vec<ChainRun> = seeds
        .par_iter()
        .map(|&s| run_chain(data, config, settings, s))
        .collect::<Result<_>>()?;
    assemble(data, config, settings, runs)
}

fn assemble(
    data: &SurveyDataset,
    config: &ModelConfig,
    settings: &McmcSettings,
    runs: Vec<ChainRun>,
) -> Result<FitResult> {
    type Getter = fn(&LatentState) -> f64;
    let mut fields: Vec<(&str, Getter)> = vec![
        (param::G, |s| s.groups as f64),
        (param::T, |s| s.total as f64),
        (param::LAMBDA_G, |s| s.lambda_g),
        (param::LAMBDA_N, |s| s.lambda_n),
        (param::ALPHA, |s| s.alpha),
    ];
    if config.family == Family::NegativeBinomial {
        fields.push((param::PHI, |s| s.phi.unwrap_or(f64::NAN)));
    }
    let mut chains = Chains::new();
    for (name, get) in &fields {
        chains.insert(
            (*name).to_string(),
            runs.iter()
                .map(|r| r.draws.iter().map(get).collect())
                .collect(),
        );
    }
    let summaries = chains
        .iter()
        .map(|(k, v)| (k.clone(), summarize(v)))
        .collect();

    let mut acceptance: BTreeMap<String, (f64, usize)> = BTreeMap::new();
    for run in &runs {
        for &(name, rate) in &run.acceptance {
            let e = acceptance.entry(name.to_string()).or_insert((0.0, 0));
            e.0 += rate;
            e.1 += 1;
        }
    }
    let dic = compute_dic(&chains, data, config)?;
    Ok(FitResult {
        family: config.family,
        summaries,
        chains,
        dic: dic.dic,
        dbar: dic.dbar,
        p_d: dic.p_d,
        acceptance_rates: acceptance
            .into_iter()
            .map(|(k, (sum, n))| (k, sum / n as f64))
            .collect(),
        settings: settings.clone(),
    })
}
