use serde::{Deserialize, Serialize};

use super::prior::PriorSpec;
use crate::error::{Error, Result};

/// Conditional distribution of an observed count given abundance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Poisson,
    #[serde(alias = "negbin", alias = "nb")]
    NegativeBinomial,
}

impl Family {
    pub fn label(&self) -> &'static str {
        match self {
            Family::Poisson => "poisson",
            Family::NegativeBinomial => "negbin",
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "poisson" => Ok(Family::Poisson),
            "negbin" | "nb" | "negative_binomial" | "negative-binomial" => {
                Ok(Family::NegativeBinomial)
            }
            other => Err(Error::Config(format!("unknown family `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    pub family: Family,
    pub prior_lambda_g: PriorSpec,
    pub prior_lambda_n: PriorSpec,
    pub prior_alpha: PriorSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prior_phi: Option<PriorSpec>,
}

impl ModelConfig {
    /// Poisson observation tier.
    pub fn poisson(lambda_g: PriorSpec, lambda_n: PriorSpec, alpha: PriorSpec) -> Self {
        Self {
            family: Family::Poisson,
            prior_lambda_g: lambda_g,
            prior_lambda_n: lambda_n,
            prior_alpha: alpha,
            prior_phi: None,
        }
    }

    /// Negative binomial observation tier with a prior on the dispersion.
    pub fn negbin(
        lambda_g: PriorSpec,
        lambda_n: PriorSpec,
        alpha: PriorSpec,
        phi: PriorSpec,
    ) -> Self {
        Self {
            family: Family::NegativeBinomial,
            prior_lambda_g: lambda_g,
            prior_lambda_n: lambda_n,
            prior_alpha: alpha,
            prior_phi: Some(phi),
        }
    }

    /// Same priors under the other observation family. Switching to the
    /// negative binomial uses `phi` (or a flat Gamma(0.01, 0.01)) for φ.
    pub fn with_family(&self, family: Family, phi: Option<PriorSpec>) -> Self {
        let mut out = self.clone();
        out.family = family;
        out.prior_phi = match family {
            Family::Poisson => None,
            Family::NegativeBinomial => Some(
                phi.or(self.prior_phi)
                    .unwrap_or_else(|| PriorSpec::gamma(0.01, 0.01)),
            ),
        };
        out
    }

    pub fn validate(&self) -> Result<()> {
        self.prior_lambda_g.validate("lambda_G")?;
        self.prior_lambda_n.validate("lambda_N")?;
        self.prior_alpha.validate("alpha")?;
        if self.prior_alpha.fixed_value() == Some(0.0) {
            return Err(Error::Config(
                "alpha fixed at 0 makes every positive count impossible".into(),
            ));
        }
        for (name, p) in [("lambda_G", self.prior_lambda_g), ("lambda_N", self.prior_lambda_n)] {
            if p.fixed_value() == Some(0.0) {
                return Err(Error::Config(format!("{name} must be positive")));
            }
        }
        match (self.family, &self.prior_phi) {
            (Family::Poisson, None) => Ok(()),
            (Family::NegativeBinomial, Some(p)) => {
                p.validate("phi")?;
                if p.fixed_value() == Some(0.0) {
                    return Err(Error::Config("phi must be positive".into()));
                }
                Ok(())
            }
            (Family::Poisson, Some(_)) => Err(Error::Config(
                "a prior on phi is only allowed with the negative binomial family".into(),
            )),
            (Family::NegativeBinomial, None) => Err(Error::Config(
                "the negative binomial family needs a prior on phi".into(),
            )),
        }
    }
}

/// One point of the sampler's state space. Group sizes are marginalized
/// through `T | G ~ Poisson(G·λ_N)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatentState {
    pub groups: u64,
    pub total: u64,
    pub lambda_g: f64,
    pub lambda_n: f64,
    pub alpha: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<f64>,
}

impl LatentState {
    pub fn check(&self) -> Result<()> {
        if self.groups == 0 && self.total > 0 {
            return Err(Error::Config(format!(
                "state has T = {} animals in zero groups",
                self.total
            )));
        }
        Ok(())
    }
}
