use rand::Rng;
use rand_distr::{Distribution, Gamma, Uniform};
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

/// Prior on one continuous hyperparameter. Gamma is always shape–rate here;
/// scale-parameterized inputs are converted on ingestion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "distribution", rename_all = "snake_case")]
pub enum PriorSpec {
    Gamma { shape: f64, rate: f64 },
    Uniform { lower: f64, upper: f64 },
    Fixed { value: f64 },
}

impl PriorSpec {
    pub fn gamma(shape: f64, rate: f64) -> Self {
        PriorSpec::Gamma { shape, rate }
    }

    pub fn gamma_scale(shape: f64, scale: f64) -> Self {
        PriorSpec::Gamma {
            shape,
            rate: 1.0 / scale,
        }
    }

    pub fn uniform(lower: f64, upper: f64) -> Self {
        PriorSpec::Uniform { lower, upper }
    }

    pub fn fixed(value: f64) -> Self {
        PriorSpec::Fixed { value }
    }

    pub fn validate(&self, name: &str) -> Result<()> {
        let ok = match *self {
            PriorSpec::Gamma { shape, rate } => {
                shape.is_finite() && shape > 0.0 && rate.is_finite() && rate > 0.0
            }
            PriorSpec::Uniform { lower, upper } => {
                lower.is_finite() && upper.is_finite() && lower >= 0.0 && upper > lower
            }
            PriorSpec::Fixed { value } => value.is_finite() && value >= 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Config(format!("invalid prior for {name}: {self:?}")))
        }
    }

    pub fn is_fixed(&self) -> bool {
        matches!(self, PriorSpec::Fixed { .. })
    }

    pub fn fixed_value(&self) -> Option<f64> {
        match *self {
            PriorSpec::Fixed { value } => Some(value),
            _ => None,
        }
    }

    /// Log density at `x`; `Fixed` contributes nothing when `x` equals the
    /// pinned value and −∞ otherwise.
    pub fn log_density(&self, x: f64) -> f64 {
        match *self {
            PriorSpec::Gamma { shape, rate } => {
                if x <= 0.0 || !x.is_finite() {
                    return f64::NEG_INFINITY;
                }
                shape * rate.ln() - ln_gamma(shape) + (shape - 1.0) * x.ln() - rate * x
            }
            PriorSpec::Uniform { lower, upper } => {
                if x > lower && x < upper {
                    -(upper - lower).ln()
                } else {
                    f64::NEG_INFINITY
                }
            }
            PriorSpec::Fixed { value } => {
                if x == value {
                    0.0
                } else {
                    f64::NEG_INFINITY
                }
            }
        }
    }

    pub fn mean(&self) -> f64 {
        match *self {
            PriorSpec::Gamma { shape, rate } => shape / rate,
            PriorSpec::Uniform { lower, upper } => 0.5 * (lower + upper),
            PriorSpec::Fixed { value } => value,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.log_density(x) > f64::NEG_INFINITY
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            PriorSpec::Gamma { shape, rate } => sample_gamma(shape, rate, rng),
            PriorSpec::Uniform { lower, upper } => {
                let u = Uniform::new(lower, upper).expect("validated bounds");
                // open interval: resample the measure-zero lower endpoint
                loop {
                    let x = u.sample(rng);
                    if x > lower {
                        return x;
                    }
                }
            }
            PriorSpec::Fixed { value } => value,
        }
    }
}

/// Shape–rate Gamma draw, kept strictly positive.
pub(crate) fn sample_gamma<R: Rng + ?Sized>(shape: f64, rate: f64, rng: &mut R) -> f64 {
    let g = Gamma::new(shape, 1.0 / rate).expect("positive gamma parameters");
    loop {
        let x = g.sample(rng);
        if x > 0.0 {
            return x;
        }
    }
}
