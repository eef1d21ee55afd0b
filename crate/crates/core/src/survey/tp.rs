use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Family, SurveyDataset};
use crate::rng::{negbin_draw, poisson_draw};

/// Data drawn from the triple Poisson hierarchy with its ground truth.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TpSimulation {
    pub data: SurveyDataset,
    pub groups: u64,
    pub total: u64,
}

fn check_observation(alpha: f64, family: Family, phi: Option<f64>) -> Result<()> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::Domain(format!("alpha must be positive, got {alpha}")));
    }
    match (family, phi) {
        (Family::Poisson, None) => Ok(()),
        (Family::Poisson, Some(_)) => Err(Error::Config("phi given for the Poisson family".into())),
        (Family::NegativeBinomial, Some(p)) if p.is_finite() && p > 0.0 => Ok(()),
        (Family::NegativeBinomial, p) => Err(Error::Config(format!(
            "negative binomial needs a positive phi, got {p:?}"
        ))),
    }
}

/// Counts `y[s][t] ~ family(α·T·ν_s)` for a known abundance.
pub fn simulate_counts<R: Rng + ?Sized>(
    total: u64,
    alpha: f64,
    nu: &[f64],
    n_replicates: usize,
    family: Family,
    phi: Option<f64>,
    rng: &mut R,
) -> Result<SurveyDataset> {
    check_observation(alpha, family, phi)?;
    if n_replicates == 0 {
        return Err(Error::Config("need at least one replicate".into()));
    }
    let counts = nu
        .iter()
        .map(|&v| {
            let mu = alpha * total as f64 * v;
            (0..n_replicates)
                .map(|_| match phi {
                    Some(p) => negbin_draw(mu, p, rng),
                    None => poisson_draw(mu, rng),
                })
                .collect()
        })
        .collect();
    SurveyDataset::from_counts(nu, counts)
}

/// G ~ Poisson(λ_G), T | G ~ Poisson(G·λ_N), then counts per
/// [`simulate_counts`].
#[allow(clippy::too_many_arguments)]
pub fn simulate_tp_data<R: Rng + ?Sized>(
    lambda_g: f64,
    lambda_n: f64,
    alpha: f64,
    nu: &[f64],
    n_replicates: usize,
    family: Family,
    phi: Option<f64>,
    rng: &mut R,
) -> Result<TpSimulation> {
    for (name, v) in [("lambda_G", lambda_g), ("lambda_N", lambda_n)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::Domain(format!("{name} must be positive, got {v}")));
        }
    }
    check_observation(alpha, family, phi)?;
    let groups = poisson_draw(lambda_g, rng);
    let total = poisson_draw(groups as f64 * lambda_n, rng);
    let data = simulate_counts(total, alpha, nu, n_replicates, family, phi, rng)?;
    Ok(TpSimulation { data, groups, total })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_rng;

    #[test]
    fn zero_groups_zero_counts() {
        let mut rng = stream_rng(0, 0);
        let sim = simulate_tp_data(1e-12, 5.0, 20.0, &[0.1, 0.2], 3, Family::Poisson, None, &mut rng)
            .unwrap();
        assert_eq!((sim.groups, sim.total), (0, 0));
        assert_eq!(sim.data.total_count(), 0);
        assert_eq!(sim.data.n_replicates(), 3);
    }

    #[test]
    fn poisson_mean_recovers_alpha_t() {
        let mut rng = stream_rng(1, 0);
        let nu = [0.01, 0.02, 0.05];
        let data = simulate_counts(40, 20.0, &nu, 20_000, Family::Poisson, None, &mut rng).unwrap();
        let mut acc = 0.0;
        let mut n = 0.0;
        for site in data.sites() {
            for &y in &site.counts {
                acc += y as f64 / site.coverage;
                n += 1.0;
            }
        }
        let est = acc / n;
        assert!((est - 800.0).abs() / 800.0 < 0.02, "{est}");
    }

    #[test]
    fn negbin_overdispersed() {
        let mut rng = stream_rng(2, 0);
        let data =
            simulate_counts(50, 20.0, &[0.02], 20_000, Family::NegativeBinomial, Some(0.2), &mut rng)
                .unwrap();
        let ys: Vec<f64> = data.sites()[0].counts.iter().map(|&y| y as f64).collect();
        let m = ys.iter().sum::<f64>() / ys.len() as f64;
        let v = ys.iter().map(|y| (y - m).powi(2)).sum::<f64>() / (ys.len() as f64 - 1.0);
        assert!(v / m > 2.0, "dispersion index {}", v / m);
    }

    #[test]
    fn family_phi_mismatch() {
        let mut rng = stream_rng(3, 0);
        assert!(simulate_counts(5, 2.0, &[0.1], 1, Family::Poisson, Some(1.0), &mut rng).is_err());
        assert!(simulate_counts(5, 2.0, &[0.1], 1, Family::NegativeBinomial, None, &mut rng).is_err());
    }
}
