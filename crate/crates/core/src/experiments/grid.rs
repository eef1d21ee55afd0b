use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::scenario::{run_scenario, Generator, PointEstimate, ScenarioResult, ScenarioSpec, TpGenerator};
use crate::error::{Error, Result};
use crate::inference::McmcSettings;
use crate::model::{Family, ModelConfig, PriorSpec};
use crate::rng::derive_seed;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FamilyLevel {
    pub family: Family,
    pub phi: Option<f64>,
}

impl FamilyLevel {
    pub fn label(&self) -> String {
        match self.phi {
            Some(p) => format!("negbin_phi{p}"),
            None => "poisson".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PriorLevel {
    pub label: String,
    pub lambda_g: PriorSpec,
    pub lambda_n: PriorSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DesignLevel {
    pub n_sites: usize,
    pub n_replicates: usize,
}

impl DesignLevel {
    pub fn label(&self) -> String {
        format!("{}x{}", self.n_sites, self.n_replicates)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlphaLevel {
    FixedCorrect,
    Uniform,
}

impl AlphaLevel {
    pub fn label(self) -> &'static str {
        match self {
            Self::FixedCorrect => "fixed_correct",
            Self::Uniform => "uniform",
        }
    }
}

/// The factorial scenario grid: 3 families × 2 α treatments × 2 λ_N × 2 λ_G
/// × 4 prior choices × 3 designs = 288 cells.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridOptions {
    pub families: Vec<FamilyLevel>,
    pub alpha_true: f64,
    pub alpha_levels: Vec<AlphaLevel>,
    pub prior_alpha_uniform: PriorSpec,
    pub lambda_n_values: Vec<f64>,
    pub lambda_g_values: Vec<f64>,
    pub priors: Vec<PriorLevel>,
    pub designs: Vec<DesignLevel>,
    /// Prior on φ whenever the family is negative binomial.
    pub prior_phi: PriorSpec,
    pub coverage_per_site: f64,
    pub base_simulations: usize,
    pub min_simulations: usize,
    pub point_estimate: PointEstimate,
}

impl Default for GridOptions {
    fn default() -> Self {
        let flat = PriorSpec::gamma(0.01, 0.01);
        let informed = PriorSpec::gamma(3.0, 1.0);
        let wide = PriorSpec::uniform(1.0, 100.0);
        let level = |label: &str, g, n| PriorLevel {
            label: label.into(),
            lambda_g: g,
            lambda_n: n,
        };
        Self {
            families: vec![
                FamilyLevel { family: Family::Poisson, phi: None },
                FamilyLevel { family: Family::NegativeBinomial, phi: Some(0.2) },
                FamilyLevel { family: Family::NegativeBinomial, phi: Some(2.0) },
            ],
            alpha_true: 20.0,
            alpha_levels: vec![AlphaLevel::FixedCorrect, AlphaLevel::Uniform],
            prior_alpha_uniform: PriorSpec::uniform(0.0, 50.0),
            lambda_n_values: vec![5.0, 10.0],
            lambda_g_values: vec![5.0, 10.0],
            priors: vec![
                level("flat", flat, flat),
                level("gamma3", informed, informed),
                level("uniform1_100", wide, wide),
                level("gamma3_n_flat_g", flat, informed),
            ],
            designs: vec![
                DesignLevel { n_sites: 10, n_replicates: 1 },
                DesignLevel { n_sites: 100, n_replicates: 1 },
                DesignLevel { n_sites: 10, n_replicates: 10 },
            ],
            prior_phi: flat,
            coverage_per_site: 0.01,
            base_simulations: 100,
            min_simulations: 10,
            point_estimate: PointEstimate::Mean,
        }
    }
}

impl GridOptions {
    pub fn n_cells(&self) -> usize {
        self.families.len()
            * self.alpha_levels.len()
            * self.lambda_n_values.len()
            * self.lambda_g_values.len()
            * self.priors.len()
            * self.designs.len()
    }

    /// Simulations per cell at a given scale: `round(base·scale)`, at
    /// least `min_simulations`.
    pub fn simulations_at(&self, scale: f64) -> Result<usize> {
        if !(scale > 0.0 && scale <= 1.0) {
            return Err(Error::Config(format!("scale must lie in (0, 1], got {scale}")));
        }
        Ok(((self.base_simulations as f64 * scale).round() as usize).max(self.min_simulations))
    }

    /// Every cell as a scenario. Cells sharing (λ_N, λ_G) share their true
    /// abundances, and cells that also share design and family share their
    /// data, so comparisons across priors and α treatments are paired.
    pub fn scenarios(&self, scale: f64, settings: &McmcSettings) -> Result<Vec<ScenarioSpec>> {
        let n_sims = self.simulations_at(scale)?;
        let mut out = Vec::with_capacity(self.n_cells());
        for fam in &self.families {
            for &alpha in &self.alpha_levels {
                for (i_n, &lambda_n) in self.lambda_n_values.iter().enumerate() {
                    for (i_g, &lambda_g) in self.lambda_g_values.iter().enumerate() {
                        let data_seed =
                            derive_seed(derive_seed(settings.seed, 0x6E1D), (i_n * 1_000 + i_g) as u64);
                        for prior in &self.priors {
                            for design in &self.designs {
                                let index = out.len() as u64;
                                out.push(self.cell(
                                    fam, alpha, lambda_n, lambda_g, prior, design, n_sims, data_seed,
                                    settings.clone().with_seed(derive_seed(settings.seed, index)),
                                ));
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    #[allow(clippy::too_many_arguments)]
    fn cell(
        &self,
        fam: &FamilyLevel,
        alpha: AlphaLevel,
        lambda_n: f64,
        lambda_g: f64,
        prior: &PriorLevel,
        design: &DesignLevel,
        n_simulations: usize,
        data_seed: u64,
        mcmc_settings: McmcSettings,
    ) -> ScenarioSpec {
        let prior_alpha = match alpha {
            AlphaLevel::FixedCorrect => PriorSpec::fixed(self.alpha_true),
            AlphaLevel::Uniform => self.prior_alpha_uniform,
        };
        let phi_prior = fam.phi.map(|_| self.prior_phi);
        let model_config = ModelConfig::poisson(prior.lambda_g, prior.lambda_n, prior_alpha)
            .with_family(fam.family, phi_prior);
        let factors = BTreeMap::from([
            ("family".to_string(), fam.label()),
            ("alpha".to_string(), alpha.label().to_string()),
            ("lambda_n".to_string(), lambda_n.to_string()),
            ("lambda_g".to_string(), lambda_g.to_string()),
            ("prior".to_string(), prior.label.clone()),
            ("design".to_string(), design.label()),
        ]);
        let label = factors.values().cloned().collect::<Vec<_>>().join("/");
        ScenarioSpec {
            label,
            generator: Generator::Tp(TpGenerator {
                lambda_g,
                lambda_n,
                alpha: self.alpha_true,
                coverage: vec![self.coverage_per_site; design.n_sites],
                n_replicates: design.n_replicates,
                family: fam.family,
                phi: fam.phi,
                total: None,
            }),
            model_config,
            n_simulations,
            mcmc_settings,
            data_seed,
            point_estimate: self.point_estimate,
            factors,
        }
    }
}

/// Runs the whole grid at `scale` (cells in parallel). Every cell is
/// returned, or the first failing cell's error.
pub fn run_appendix_grid(scale: f64, settings: &McmcSettings, opts: &GridOptions) -> Result<Vec<ScenarioResult>> {
    opts.scenarios(scale, settings)?
        .par_iter()
        .map(run_scenario)
        .collect()
}
