//! Vestige accumulation under exponential decay, and its steady state.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::poisson_draw;

/// Fresh vestiges per individual per day (`beta`) and the daily exponential
/// decay rate (`delta_p`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayParams {
    pub beta: f64,
    pub delta_p: f64,
}

impl DecayParams {
    pub fn new(beta: f64, delta_p: f64) -> Result<Self> {
        let p = Self { beta, delta_p };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.beta.is_finite() && self.beta > 0.0) {
            return Err(Error::Domain(format!(
                "vestige production rate must be finite and > 0, got {}",
                self.beta
            )));
        }
        if !(self.delta_p.is_finite() && self.delta_p > 0.0) {
            return Err(Error::Domain(format!(
                "decay rate must be finite and > 0 (the residue series diverges otherwise), got {}",
                self.delta_p
            )));
        }
        Ok(())
    }

    /// Mean standing stock per individual on day `t` (1-based):
    /// `β·Σ_{k=0}^{t−1} e^{−kδ}`.
    pub fn mean_per_individual(&self, t: u64) -> f64 {
        // geometric partial sum, (1 − e^{−tδ}) / (1 − e^{−δ})
        self.beta * (-(t as f64) * self.delta_p).exp_m1() / (-self.delta_p).exp_m1()
    }
}

/// Vestiges available per individual once production and decay balance:
/// `e^δ·β / (e^δ − 1)`.
pub fn steady_state_alpha(decay: &DecayParams) -> Result<f64> {
    decay.validate()?;
    // e^δ/(e^δ − 1) = 1/(1 − e^{−δ})
    Ok(decay.beta / -(-decay.delta_p).exp_m1())
}

/// Simulates the transient vestige counts `V_1..V_horizon` for `total`
/// animals; day `t` is Poisson with mean `β·T + Σ_{j<t} β·T·e^{−δ(t−j)}`.
pub fn accumulate_vestiges<R: Rng + ?Sized>(
    decay: &DecayParams,
    total: u64,
    horizon: usize,
    rng: &mut R,
) -> Result<Vec<u64>> {
    decay.validate()?;
    if horizon == 0 {
        return Err(Error::Domain("horizon must be at least one day".into()));
    }
    let t_f = total as f64;
    Ok((1..=horizon as u64)
        .map(|t| poisson_draw(decay.mean_per_individual(t) * t_f, rng))
        .collect())
}
