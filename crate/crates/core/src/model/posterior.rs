//! Joint log-posterior of the triple Poisson hierarchy
//!
//! ```text
//! Y_{s,t} | T  ~ Poisson(α·T·ν_s)   (or NegBin(α·T·ν_s, φ))
//! T | G        ~ Poisson(G·λ_N)
//! G            ~ Poisson(λ_G)
//! ```

use super::config::{Family, LatentState, ModelConfig};
use super::data::SurveyDataset;
use super::density::{
    ln_factorial, ln_rising_factorial, log_pmf_negbin, log_pmf_poisson, negbin_unchecked,
    poisson_unchecked,
};
use crate::error::{Error, Result};

/// Sum of the per-count log pmfs, each count with mean `α·T·ν_s`.
pub fn observation_log_lik(
    data: &SurveyDataset,
    total: u64,
    alpha: f64,
    phi: Option<f64>,
    family: Family,
) -> Result<f64> {
    let scale = alpha * total as f64;
    let mut acc = 0.0;
    for (y, nu) in data.cells() {
        let mu = scale * nu;
        acc += match family {
            Family::Poisson => log_pmf_poisson(y, mu)?,
            Family::NegativeBinomial => {
                let phi = phi.ok_or_else(|| {
                    Error::Config("negative binomial likelihood needs phi".into())
                })?;
                log_pmf_negbin(y, mu, phi)?
            }
        };
        if acc == f64::NEG_INFINITY {
            break;
        }
    }
    Ok(acc)
}

/// `log Poisson(G; λ_G) + log Poisson(T; G·λ_N)`.
pub fn latent_log_prior(groups: u64, total: u64, lambda_g: f64, lambda_n: f64) -> f64 {
    debug_assert!(lambda_g > 0.0 && lambda_n > 0.0);
    poisson_unchecked(groups, lambda_g) + poisson_unchecked(total, groups as f64 * lambda_n)
}

pub fn log_posterior(state: &LatentState, data: &SurveyDataset, config: &ModelConfig) -> Result<f64> {
    state.check()?;
    match (config.family, state.phi) {
        (Family::Poisson, Some(_)) => {
            return Err(Error::Config(
                "state carries phi but the family is Poisson".into(),
            ))
        }
        (Family::NegativeBinomial, None) => {
            return Err(Error::Config(
                "negative binomial family but the state has no phi".into(),
            ))
        }
        _ => {}
    }
    let mut lp = config.prior_lambda_g.log_density(state.lambda_g)
        + config.prior_lambda_n.log_density(state.lambda_n)
        + config.prior_alpha.log_density(state.alpha);
    if let (Some(prior), Some(phi)) = (&config.prior_phi, state.phi) {
        lp += prior.log_density(phi);
    }
    if lp == f64::NEG_INFINITY {
        return Ok(lp);
    }
    lp += latent_log_prior(state.groups, state.total, state.lambda_g, state.lambda_n);
    if lp == f64::NEG_INFINITY {
        return Ok(lp);
    }
    Ok(lp + observation_log_lik(data, state.total, state.alpha, state.phi, config.family)?)
}

/// Sufficient statistics of a dataset for repeated likelihood evaluation
/// inside the sampler. Agrees with [`observation_log_lik`] to rounding.
#[derive(Debug, Clone)]
pub(crate) struct CountSummary {
    cells: Vec<(u64, f64)>,
    sum_y: f64,
    sum_nu: f64,
    sum_y_ln_nu: f64,
    sum_ln_fact: f64,
}

impl CountSummary {
    pub fn new(data: &SurveyDataset) -> Self {
        let cells: Vec<(u64, f64)> = data.cells().collect();
        let sum_y = cells.iter().map(|&(y, _)| y as f64).sum();
        let sum_nu = cells.iter().map(|&(_, nu)| nu).sum();
        let sum_y_ln_nu = cells.iter().map(|&(y, nu)| y as f64 * nu.ln()).sum();
        let sum_ln_fact = cells.iter().map(|&(y, _)| ln_factorial(y)).sum();
        Self {
            cells,
            sum_y,
            sum_nu,
            sum_y_ln_nu,
            sum_ln_fact,
        }
    }

    pub fn sum_y(&self) -> f64 {
        self.sum_y
    }

    pub fn sum_nu(&self) -> f64 {
        self.sum_nu
    }

    /// Poisson log-likelihood with `scale = α·T`.
    pub fn poisson(&self, scale: f64) -> f64 {
        if scale == 0.0 {
            return if self.sum_y == 0.0 { 0.0 } else { f64::NEG_INFINITY };
        }
        self.sum_y * scale.ln() + self.sum_y_ln_nu - scale * self.sum_nu - self.sum_ln_fact
    }

    /// `Σ ln Γ(y+φ) − ln Γ(φ) − ln y!`, the part of the negative binomial
    /// likelihood that does not move with the mean.
    pub fn negbin_coef(&self, phi: f64) -> f64 {
        self.cells
            .iter()
            .map(|&(y, _)| ln_rising_factorial(phi, y) - ln_factorial(y))
            .sum()
    }

    pub fn negbin(&self, scale: f64, phi: f64, coef: f64) -> f64 {
        if scale == 0.0 {
            return if self.sum_y == 0.0 { 0.0 } else { f64::NEG_INFINITY };
        }
        // coef is carried whole, so pass 0 per cell
        coef + self
            .cells
            .iter()
            .map(|&(y, nu)| negbin_unchecked(y, scale * nu, phi, 0.0))
            .sum::<f64>()
    }
}
