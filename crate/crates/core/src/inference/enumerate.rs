//! Exact posterior over (G, T) by direct evaluation on a grid, for
//! instances whose continuous parameters are all pinned.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{log_posterior, LatentState, ModelConfig, SurveyDataset};

/// Largest truncated posterior mass tolerated outside the grid.
pub const TAIL_MASS_LIMIT: f64 = 1e-10;

/// Normalized `p(G, T | y)` for `G ∈ 0..=g_max`, `T ∈ 0..=t_max`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PosteriorTable {
    pub g_max: u64,
    pub t_max: u64,
    /// `probs[g][t]`
    pub probs: Vec<Vec<f64>>,
    /// Mass found beyond the caps, relative to the whole posterior.
    pub tail_mass: f64,
}

impl PosteriorTable {
    pub fn marginal_total(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.t_max as usize + 1];
        for row in &self.probs {
            for (acc, p) in out.iter_mut().zip(row) {
                *acc += p;
            }
        }
        out
    }

    pub fn marginal_groups(&self) -> Vec<f64> {
        self.probs.iter().map(|r| r.iter().sum()).collect()
    }

    pub fn mean_total(&self) -> f64 {
        self.marginal_total()
            .iter()
            .enumerate()
            .map(|(t, p)| t as f64 * p)
            .sum()
    }

    pub fn total_mass(&self) -> f64 {
        self.probs.iter().flatten().sum()
    }

    /// Most probable `(G, T)` cell.
    pub fn mode(&self) -> (u64, u64) {
        let mut best = (0, 0, f64::NEG_INFINITY);
        for (g, row) in self.probs.iter().enumerate() {
            for (t, &p) in row.iter().enumerate() {
                if p > best.2 {
                    best = (g as u64, t as u64, p);
                }
            }
        }
        (best.0, best.1)
    }
}

fn pinned(config: &ModelConfig) -> Result<LatentState> {
    let fixed = |name: &str, p: &crate::model::PriorSpec| {
        p.fixed_value().ok_or_else(|| {
            Error::Config(format!(
                "exact enumeration needs {name} pinned by a fixed prior, got {p:?}"
            ))
        })
    };
    Ok(LatentState {
        groups: 0,
        total: 0,
        lambda_g: fixed("lambda_G", &config.prior_lambda_g)?,
        lambda_n: fixed("lambda_N", &config.prior_lambda_n)?,
        alpha: fixed("alpha", &config.prior_alpha)?,
        phi: match &config.prior_phi {
            Some(p) => Some(fixed("phi", p)?),
            None => None,
        },
    })
}

/// Exact joint pmf of (G, T). The mass beyond the caps is measured by
/// continuing the scan past them until the terms vanish; more than
/// [`TAIL_MASS_LIMIT`] of it is an error.
pub fn enumerate_posterior(
    data: &SurveyDataset,
    config: &ModelConfig,
    g_max: u64,
    t_max: u64,
) -> Result<PosteriorTable> {
    config.validate()?;
    let base = pinned(config)?;
    let log_post = |g: u64, t: u64| -> Result<f64> {
        if g == 0 && t > 0 {
            return Ok(f64::NEG_INFINITY);
        }
        let s = LatentState {
            groups: g,
            total: t,
            ..base.clone()
        };
        log_posterior(&s, data, config)
    };

    let mut grid = vec![vec![f64::NEG_INFINITY; t_max as usize + 1]; g_max as usize + 1];
    let mut top = f64::NEG_INFINITY;
    for g in 0..=g_max {
        for t in 0..=t_max {
            let lp = log_post(g, t)?;
            grid[g as usize][t as usize] = lp;
            top = top.max(lp);
        }
    }
    if top == f64::NEG_INFINITY {
        return Err(Error::Estimation(
            "posterior has no mass inside the enumeration grid".into(),
        ));
    }
    let inside: f64 = grid.iter().flatten().map(|lp| (lp - top).exp()).sum();

    // Terms below this (relative to the peak) cannot move the tail estimate.
    let negligible = (TAIL_MASS_LIMIT * 1e-8).ln();
    let mut outside = 0.0;
    // T beyond the cap for each in-grid row
    for g in 0..=g_max {
        outside += scan_tail(|t| log_post(g, t), t_max + 1, top, negligible)?;
    }
    // rows beyond the G cap, each over all T
    let mut g = g_max + 1;
    let mut prev_row = f64::INFINITY;
    loop {
        let row_inside: f64 = (0..=t_max)
            .map(|t| log_post(g, t).map(|lp| (lp - top).exp()))
            .sum::<Result<f64>>()?;
        let row = row_inside + scan_tail(|t| log_post(g, t), t_max + 1, top, negligible)?;
        outside += row;
        if (row == 0.0 || row.ln() < negligible) && row <= prev_row {
            break;
        }
        prev_row = row;
        g += 1;
        if g > g_max.saturating_mul(20).max(g_max + 10_000) {
            break;
        }
    }

    let tail_mass = outside / (inside + outside);
    if tail_mass > TAIL_MASS_LIMIT {
        return Err(Error::CapTooSmall {
            tail_mass,
            limit: TAIL_MASS_LIMIT,
        });
    }
    let probs = grid
        .into_iter()
        .map(|row| row.into_iter().map(|lp| (lp - top).exp() / inside).collect())
        .collect();
    Ok(PosteriorTable {
        g_max,
        t_max,
        probs,
        tail_mass,
    })
}

/// Mass of `t ≥ start` relative to `exp(top)`, scanning until terms fall
/// below `negligible` while decreasing.
fn scan_tail<F>(mut log_post: F, start: u64, top: f64, negligible: f64) -> Result<f64>
where
    F: FnMut(u64) -> Result<f64>,
{
    let mut acc = 0.0;
    let mut prev = f64::INFINITY;
    let mut t = start;
    loop {
        let rel = log_post(t)? - top;
        acc += rel.exp();
        if rel < negligible && rel <= prev {
            break;
        }
        prev = rel;
        t += 1;
        if t > start.saturating_mul(50).max(start + 100_000) {
            break;
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::PriorSpec;

    fn fixed_cfg(lg: f64, ln: f64, alpha: f64) -> ModelConfig {
        ModelConfig::poisson(
            PriorSpec::fixed(lg),
            PriorSpec::fixed(ln),
            PriorSpec::fixed(alpha),
        )
    }

    #[test]
    fn normalized() {
        let data = SurveyDataset::from_counts(&[0.5], vec![vec![6, 9]]).unwrap();
        let table = enumerate_posterior(&data, &fixed_cfg(3.0, 4.0, 2.0), 15, 120).unwrap();
        assert!((table.total_mass() - 1.0).abs() < 1e-12);
        assert!(table.tail_mass < TAIL_MASS_LIMIT);
        // zero groups cannot hold animals
        assert!(table.probs[0][1..].iter().all(|&p| p == 0.0));
    }

    #[test]
    fn empty_counts_with_strong_priors_mode_at_origin() {
        let data = SurveyDataset::from_counts(&[0.5], vec![vec![0, 0, 0]]).unwrap();
        let table = enumerate_posterior(&data, &fixed_cfg(0.3, 0.5, 4.0), 10, 40).unwrap();
        assert_eq!(table.mode(), (0, 0));
    }

    #[test]
    fn cap_too_small() {
        let data = SurveyDataset::from_counts(&[0.5], vec![vec![6, 9]]).unwrap();
        let err = enumerate_posterior(&data, &fixed_cfg(3.0, 4.0, 2.0), 2, 8).unwrap_err();
        assert!(matches!(err, Error::CapTooSmall { .. }), "{err}");
    }

    #[test]
    fn requires_pinned_parameters() {
        let data = SurveyDataset::from_counts(&[0.5], vec![vec![6]]).unwrap();
        let cfg = ModelConfig::poisson(
            PriorSpec::gamma(1.0, 1.0),
            PriorSpec::fixed(4.0),
            PriorSpec::fixed(2.0),
        );
        assert!(matches!(
            enumerate_posterior(&data, &cfg, 10, 50),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn marginals_agree() {
        let data = SurveyDataset::from_counts(&[0.5], vec![vec![6, 9]]).unwrap();
        let table = enumerate_posterior(&data, &fixed_cfg(3.0, 4.0, 2.0), 15, 120).unwrap();
        let mt: f64 = table.marginal_total().iter().sum();
        let mg: f64 = table.marginal_groups().iter().sum();
        assert!((mt - 1.0).abs() < 1e-12 && (mg - 1.0).abs() < 1e-12);
        // the likelihood centres T near the mean count 7.5
        let m = table.mean_total();
        assert!(m > 6.0 && m < 10.0, "{m}");
    }
}
