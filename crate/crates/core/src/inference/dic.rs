//! Deviance information criterion over the observation tier.

use serde::{Deserialize, Serialize};

use super::run::{param, Chains};
use crate::error::{Error, Result};
use crate::model::{CountSummary, Family, ModelConfig, SurveyDataset};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Dic {
    pub dbar: f64,
    pub p_d: f64,
    pub dic: f64,
}

fn deviance(summary: &CountSummary, family: Family, total: f64, alpha: f64, phi: Option<f64>) -> f64 {
    let scale = alpha * total;
    let ll = match family {
        Family::Poisson => summary.poisson(scale),
        Family::NegativeBinomial => {
            let phi = phi.expect("checked by caller");
            summary.negbin(scale, phi, summary.negbin_coef(phi))
        }
    };
    -2.0 * ll
}

fn pooled<'c>(chains: &'c Chains, key: &str) -> Result<Vec<f64>> {
    let draws: Vec<f64> = chains
        .get(key)
        .ok_or_else(|| Error::Estimation(format!("no draws for `{key}`")))?
        .iter()
        .flatten()
        .copied()
        .collect();
    Ok(draws)
}

/// `D(θ) = −2·log p(y | T, α, φ)` averaged over the draws (`Dbar`), with
/// `p_D = Dbar − D(θ̄)` at the posterior means (T rounded to an integer).
pub fn compute_dic(chains: &Chains, data: &SurveyDataset, config: &ModelConfig) -> Result<Dic> {
    let total = pooled(chains, param::T)?;
    let alpha = pooled(chains, param::ALPHA)?;
    if total.is_empty() || total.len() != alpha.len() {
        return Err(Error::Estimation("empty or mismatched chains for DIC".into()));
    }
    let phi = match config.family {
        Family::Poisson => None,
        Family::NegativeBinomial => {
            let p = pooled(chains, param::PHI)?;
            if p.len() != total.len() {
                return Err(Error::Estimation("phi chain length mismatch".into()));
            }
            Some(p)
        }
    };
    let summary = CountSummary::new(data);
    let n = total.len() as f64;
    let dbar = (0..total.len())
        .map(|i| {
            deviance(
                &summary,
                config.family,
                total[i],
                alpha[i],
                phi.as_ref().map(|p| p[i]),
            )
        })
        .sum::<f64>()
        / n;
    let mean = |xs: &[f64]| xs.iter().sum::<f64>() / xs.len() as f64;
    let d_at_mean = deviance(
        &summary,
        config.family,
        mean(&total).round(),
        mean(&alpha),
        phi.as_deref().map(mean),
    );
    let p_d = dbar - d_at_mean;
    Ok(Dic {
        dbar,
        p_d,
        dic: dbar + p_d,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{observation_log_lik, PriorSpec};

    #[test]
    fn single_draw_has_no_effective_parameters() {
        let data = SurveyDataset::from_counts(&[0.1, 0.2], vec![vec![4], vec![9]]).unwrap();
        let g = PriorSpec::gamma(1.0, 1.0);
        let cfg = ModelConfig::negbin(g, g, g, g);
        let mut chains = Chains::new();
        chains.insert(param::T.into(), vec![vec![30.0]]);
        chains.insert(param::ALPHA.into(), vec![vec![1.5]]);
        chains.insert(param::PHI.into(), vec![vec![0.8]]);
        let dic = compute_dic(&chains, &data, &cfg).unwrap();
        let d = -2.0
            * observation_log_lik(&data, 30, 1.5, Some(0.8), Family::NegativeBinomial).unwrap();
        assert!(dic.p_d.abs() < 1e-12);
        assert!((dic.dic - d).abs() < 1e-9);
    }

    #[test]
    fn dic_identity() {
        let data = SurveyDataset::from_counts(&[0.1], vec![vec![4, 6]]).unwrap();
        let g = PriorSpec::gamma(1.0, 1.0);
        let cfg = ModelConfig::poisson(g, g, g);
        let mut chains = Chains::new();
        chains.insert(param::T.into(), vec![vec![40.0, 55.0], vec![47.0, 52.0]]);
        chains.insert(param::ALPHA.into(), vec![vec![1.1, 0.9], vec![1.0, 1.05]]);
        let dic = compute_dic(&chains, &data, &cfg).unwrap();
        assert!((dic.dic - (dic.dbar + dic.p_d)).abs() < 1e-12);
        assert!(dic.p_d > 0.0);
    }

    #[test]
    fn missing_phi_chain() {
        let data = SurveyDataset::from_counts(&[0.1], vec![vec![4]]).unwrap();
        let g = PriorSpec::gamma(1.0, 1.0);
        let cfg = ModelConfig::negbin(g, g, g, g);
        let mut chains = Chains::new();
        chains.insert(param::T.into(), vec![vec![40.0]]);
        chains.insert(param::ALPHA.into(), vec![vec![1.1]]);
        assert!(compute_dic(&chains, &data, &cfg).is_err());
    }
}
