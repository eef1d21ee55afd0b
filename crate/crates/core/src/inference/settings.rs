use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct McmcSettings {
    pub n_chains: usize,
    pub n_iterations: usize,
    pub burn_in: usize,
    pub thin: usize,
    pub seed: u64,
    pub rw_scale_g: f64,
    pub rw_scale_t: f64,
    pub rw_scale_logalpha: f64,
    pub rw_scale_logphi: f64,
    /// Robbins–Monro tuning of every random-walk scale during burn-in.
    pub adapt: bool,
    pub adapt_window: usize,
    /// Use exact conjugate draws where the prior allows; `false` sends
    /// α through the random-walk kernel even when a Gamma draw exists.
    pub conjugate_updates: bool,
}

impl Default for McmcSettings {
    fn default() -> Self {
        Self {
            n_chains: 4,
            n_iterations: 20_000,
            burn_in: 5_000,
            thin: 1,
            seed: 0,
            rw_scale_g: 1.0,
            rw_scale_t: 2.0,
            rw_scale_logalpha: 0.5,
            rw_scale_logphi: 0.5,
            adapt: true,
            adapt_window: 50,
            conjugate_updates: true,
        }
    }
}

impl McmcSettings {
    /// Reduced settings for simulation studies: 2 chains × 8 000 iterations.
    pub fn experiment() -> Self {
        Self {
            n_chains: 2,
            n_iterations: 8_000,
            burn_in: 2_000,
            ..Self::default()
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_chains == 0 {
            return Err(Error::Config("need at least one chain".into()));
        }
        if self.burn_in >= self.n_iterations {
            return Err(Error::Config(format!(
                "burn-in ({}) must be shorter than the run ({})",
                self.burn_in, self.n_iterations
            )));
        }
        if self.thin == 0 {
            return Err(Error::Config("thin must be >= 1".into()));
        }
        if self.adapt && self.adapt_window == 0 {
            return Err(Error::Config("adapt_window must be >= 1".into()));
        }
        for (name, s) in [
            ("rw_scale_g", self.rw_scale_g),
            ("rw_scale_t", self.rw_scale_t),
            ("rw_scale_logalpha", self.rw_scale_logalpha),
            ("rw_scale_logphi", self.rw_scale_logphi),
        ] {
            if !(s.is_finite() && s > 0.0) {
                return Err(Error::Config(format!("{name} must be > 0, got {s}")));
            }
        }
        Ok(())
    }

    /// Draws kept per chain after burn-in and thinning.
    pub fn kept_per_chain(&self) -> usize {
        (self.n_iterations - self.burn_in).div_ceil(self.thin)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_valid() {
        McmcSettings::default().validate().unwrap();
        McmcSettings::experiment().validate().unwrap();
        assert_eq!(McmcSettings::default().kept_per_chain(), 15_000);
    }

    #[test]
    fn rejects_bad_settings() {
        let mut s = McmcSettings::default();
        s.burn_in = s.n_iterations;
        assert!(s.validate().is_err());
        let mut s = McmcSettings::default();
        s.rw_scale_t = 0.0;
        assert!(s.validate().is_err());
        let mut s = McmcSettings::default();
        s.thin = 0;
        assert!(s.validate().is_err());
    }

    #[test]
    fn thinning_count() {
        let s = McmcSettings {
            n_iterations: 105,
            burn_in: 5,
            thin: 3,
            ..McmcSettings::default()
        };
        assert_eq!(s.kept_per_chain(), 34);
    }
}
