//! Count densities shared by every tier of the hierarchy.

use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

/// Below this count the rising factorial `Γ(y+φ)/Γ(φ)` is summed as logs
/// term by term, which stays exact when φ is huge.
const RISING_FACTORIAL_TERMS: u64 = 64;

#[inline]
pub(crate) fn ln_factorial(y: u64) -> f64 {
    if y < 2 {
        0.0
    } else {
        ln_gamma(y as f64 + 1.0)
    }
}

/// `ln Γ(y + φ) − ln Γ(φ)`.
#[inline]
pub(crate) fn ln_rising_factorial(phi: f64, y: u64) -> f64 {
    if y <= RISING_FACTORIAL_TERMS {
        (0..y).map(|k| (phi + k as f64).ln()).sum()
    } else {
        ln_gamma(y as f64 + phi) - ln_gamma(phi)
    }
}

/// Log Poisson pmf. A zero mean puts all mass on zero.
pub fn log_pmf_poisson(y: u64, mu: f64) -> Result<f64> {
    if !mu.is_finite() {
        return Err(Error::Domain(format!("Poisson mean must be finite, got {mu}")));
    }
    if mu < 0.0 {
        return Err(Error::Domain(format!("Poisson mean must be >= 0, got {mu}")));
    }
    Ok(poisson_unchecked(y, mu))
}

#[inline]
pub(crate) fn poisson_unchecked(y: u64, mu: f64) -> f64 {
    if mu == 0.0 {
        return if y == 0 { 0.0 } else { f64::NEG_INFINITY };
    }
    y as f64 * mu.ln() - mu - ln_factorial(y)
}

/// Log negative binomial pmf in mean–dispersion form: mean `mu`, variance
/// `mu + mu²/phi`. Smaller `phi` means heavier overdispersion.
pub fn log_pmf_negbin(y: u64, mu: f64, phi: f64) -> Result<f64> {
    if !phi.is_finite() || phi <= 0.0 {
        return Err(Error::Domain(format!(
            "dispersion must be finite and > 0, got {phi}"
        )));
    }
    if !mu.is_finite() || mu < 0.0 {
        return Err(Error::Domain(format!(
            "negative binomial mean must be finite and >= 0, got {mu}"
        )));
    }
    Ok(negbin_unchecked(y, mu, phi, ln_rising_factorial(phi, y) - ln_factorial(y)))
}

/// `coef` is `ln Γ(y+φ) − ln Γ(φ) − ln y!`, which only depends on (y, φ)
/// and is cached by the sampler across updates of the mean.
#[inline]
pub(crate) fn negbin_unchecked(y: u64, mu: f64, phi: f64, coef: f64) -> f64 {
    if mu == 0.0 {
        return if y == 0 { 0.0 } else { f64::NEG_INFINITY };
    }
    let yf = y as f64;
    // φ ln(φ/(φ+μ)) = −φ ln(1 + μ/φ)
    let head = -phi * (mu / phi).ln_1p();
    let tail = if y == 0 {
        0.0
    } else {
        yf * (mu.ln() - (phi + mu).ln())
    };
    coef + head + tail
}
