//! TOML run configuration: `[model]` with one table per prior, `[mcmc]`
//! sampler settings, optional `[study]` geometry. Unknown keys are errors.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::geometry::coverage_from_geometry;
use crate::error::{Error, Result};
use crate::inference::McmcSettings;
use crate::model::{Family, ModelConfig, PriorSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parameterization {
    Rate,
    Scale,
}

/// A Gamma prior exactly as quoted: shape plus a second parameter whose
/// meaning is given by `parameterization`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaQuote {
    pub shape: f64,
    pub parameter: f64,
    pub parameterization: Parameterization,
}

impl GammaQuote {
    pub fn to_prior(self) -> PriorSpec {
        match self.parameterization {
            Parameterization::Rate => PriorSpec::gamma(self.shape, self.parameter),
            Parameterization::Scale => PriorSpec::gamma_scale(self.shape, self.parameter),
        }
    }

    pub fn mean(self) -> f64 {
        self.to_prior().mean()
    }
}

/// One prior as written in a config file.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "distribution", rename_all = "snake_case", deny_unknown_fields)]
pub enum PriorEntry {
    /// Give exactly one of `rate` or `scale`; `parameterization`, if
    /// present, must name the one given.
    Gamma {
        shape: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        rate: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        scale: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        parameterization: Option<Parameterization>,
    },
    Uniform {
        lower: f64,
        upper: f64,
    },
    Fixed {
        value: f64,
    },
}

impl PriorEntry {
    pub fn to_prior(self, name: &str) -> Result<PriorSpec> {
        let prior = match self {
            PriorEntry::Gamma {
                shape,
                rate,
                scale,
                parameterization,
            } => {
                let quote = match (rate, scale, parameterization) {
                    (Some(r), None, None | Some(Parameterization::Rate)) => GammaQuote {
                        shape,
                        parameter: r,
                        parameterization: Parameterization::Rate,
                    },
                    (None, Some(s), None | Some(Parameterization::Scale)) => GammaQuote {
                        shape,
                        parameter: s,
                        parameterization: Parameterization::Scale,
                    },
                    _ => {
                        return Err(Error::Config(format!(
                            "gamma prior for {name} needs exactly one of `rate` or `scale`, matching `parameterization`"
                        )))
                    }
                };
                quote.to_prior()
            }
            PriorEntry::Uniform { lower, upper } => PriorSpec::uniform(lower, upper),
            PriorEntry::Fixed { value } => PriorSpec::fixed(value),
        };
        prior.validate(name)?;
        Ok(prior)
    }
}

impl From<PriorSpec> for PriorEntry {
    fn from(p: PriorSpec) -> Self {
        match p {
            PriorSpec::Gamma { shape, rate } => PriorEntry::Gamma {
                shape,
                rate: Some(rate),
                scale: None,
                parameterization: Some(Parameterization::Rate),
            },
            PriorSpec::Uniform { lower, upper } => PriorEntry::Uniform { lower, upper },
            PriorSpec::Fixed { value } => PriorEntry::Fixed { value },
        }
    }
}

impl From<GammaQuote> for PriorEntry {
    fn from(q: GammaQuote) -> Self {
        let (rate, scale) = match q.parameterization {
            Parameterization::Rate => (Some(q.parameter), None),
            Parameterization::Scale => (None, Some(q.parameter)),
        };
        PriorEntry::Gamma {
            shape: q.shape,
            rate,
            scale,
            parameterization: Some(q.parameterization),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    pub family: Family,
    pub lambda_g: PriorEntry,
    pub lambda_n: PriorEntry,
    pub alpha: PriorEntry,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<PriorEntry>,
}

impl ModelSection {
    pub fn to_model_config(&self) -> Result<ModelConfig> {
        let config = ModelConfig {
            family: self.family,
            prior_lambda_g: self.lambda_g.to_prior("lambda_G")?,
            prior_lambda_n: self.lambda_n.to_prior("lambda_N")?,
            prior_alpha: self.alpha.to_prior("alpha")?,
            prior_phi: self.phi.map(|p| p.to_prior("phi")).transpose()?,
        };
        config.validate()?;
        Ok(config)
    }
}

impl From<&ModelConfig> for ModelSection {
    fn from(c: &ModelConfig) -> Self {
        Self {
            family: c.family,
            lambda_g: c.prior_lambda_g.into(),
            lambda_n: c.prior_lambda_n.into(),
            alpha: c.prior_alpha.into(),
            phi: c.prior_phi.map(Into::into),
        }
    }
}

/// Survey geometry, for deriving coverages.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StudySection {
    pub area_km2: f64,
    pub strip_halfwidth_m: f64,
    #[serde(default)]
    pub transect_lengths_m: Vec<f64>,
}

impl StudySection {
    pub fn coverages(&self) -> Result<Vec<f64>> {
        self.transect_lengths_m
            .iter()
            .map(|&l| coverage_from_geometry(l, self.strip_halfwidth_m, self.area_km2))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub model: ModelSection,
    #[serde(default)]
    pub mcmc: McmcSettings,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub study: Option<StudySection>,
}

impl ConfigFile {
    pub fn parse(text: &str, source: &str) -> Result<Self> {
        let cfg: ConfigFile =
            toml::from_str(text).map_err(|e| Error::Config(format!("{source}: {}", e.to_string().trim_end())))?;
        cfg.model.to_model_config()?;
        cfg.mcmc.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(format!("cannot serialize config: {e}")))
    }
}

pub fn load_config(path: impl AsRef<Path>) -> Result<ConfigFile> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    ConfigFile::parse(&text, &path.display().to_string())
}
