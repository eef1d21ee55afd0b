use serde::{Deserialize, Serialize};

use super::design::DistanceData;
use super::detection::{effective_strip_half_width, half_normal_mle, neg_log_lik, SigmaEstimate};
use crate::error::{Error, Result};

/// Standard-normal 97.5% point.
const Z_975: f64 = 1.959963984540054;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DsEstimate {
    pub sigma_hat: f64,
    pub sigma_at_bracket_edge: bool,
    /// Effective strip half-width, m.
    pub esw_hat: f64,
    /// Vestiges per km².
    pub vestige_density: f64,
    /// Animals per km².
    pub animal_density: f64,
    pub abundance: f64,
    pub ci_lower: f64,
    pub ci_upper: f64,
    /// Coefficient of variation behind the log-normal interval.
    pub cv: f64,
}

/// Converts a standing vestige density (per km²) to animal density: the
/// standing stock divided by the decay time gives daily production, which
/// divided by per-animal daily production gives animals.
pub fn abundance_from_vestige_density(vestige_density: f64, delta_days: f64, lambda_per_day: f64) -> f64 {
    vestige_density / delta_days / lambda_per_day
}

/// Distance-sampling abundance from line-transect distances.
///
/// The interval is log-normal, with CV² the sum of the encounter-rate
/// variance between transects and the delta-method variance of the
/// effective strip width.
pub fn ds_abundance(
    data: &DistanceData,
    area_km2: f64,
    delta_days: f64,
    lambda_per_day: f64,
) -> Result<DsEstimate> {
    check_positive(area_km2, delta_days, lambda_per_day)?;
    let n = data.n_detected();
    if n == 0 {
        return Err(Error::Estimation("no detections; density is not estimable".into()));
    }
    let distances = data.pooled();
    let fit = half_normal_mle(&distances, data.truncation_m)?;
    let esw_cv2 = esw_cv2(&distances, fit.sigma, fit.at_bracket_edge, data.truncation_m);
    Ok(assemble(data, fit, esw_cv2, area_km2, delta_days, lambda_per_day))
}

/// As [`ds_abundance`] with the detection scale known rather than fitted;
/// the interval then carries encounter-rate variance only.
pub fn ds_abundance_known_sigma(
    data: &DistanceData,
    sigma: f64,
    area_km2: f64,
    delta_days: f64,
    lambda_per_day: f64,
) -> Result<DsEstimate> {
    check_positive(area_km2, delta_days, lambda_per_day)?;
    if !(sigma > 0.0) {
        return Err(Error::Domain(format!("sigma must be positive, got {sigma}")));
    }
    if data.n_detected() == 0 {
        return Err(Error::Estimation("no detections; density is not estimable".into()));
    }
    let fit = SigmaEstimate {
        sigma,
        at_bracket_edge: false,
    };
    Ok(assemble(data, fit, 0.0, area_km2, delta_days, lambda_per_day))
}

fn check_positive(area_km2: f64, delta_days: f64, lambda_per_day: f64) -> Result<()> {
    for (name, v) in [
        ("area_km2", area_km2),
        ("delta_days", delta_days),
        ("lambda_per_day", lambda_per_day),
    ] {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::Domain(format!("{name} must be positive, got {v}")));
        }
    }
    Ok(())
}

fn assemble(
    data: &DistanceData,
    fit: SigmaEstimate,
    esw_cv2: f64,
    area_km2: f64,
    delta_days: f64,
    lambda_per_day: f64,
) -> DsEstimate {
    let esw = effective_strip_half_width(fit.sigma, data.truncation_m);
    let length_km = data.total_length_m() / 1e3;
    let vestige_density = data.n_detected() as f64 / (2.0 * (esw / 1e3) * length_km);
    let animal_density = abundance_from_vestige_density(vestige_density, delta_days, lambda_per_day);
    let abundance = animal_density * area_km2;

    let cv2 = encounter_rate_cv2(data) + esw_cv2;
    let c = (Z_975 * (1.0 + cv2).ln().sqrt()).exp();
    DsEstimate {
        sigma_hat: fit.sigma,
        sigma_at_bracket_edge: fit.at_bracket_edge,
        esw_hat: esw,
        vestige_density,
        animal_density,
        abundance,
        ci_lower: abundance / c,
        ci_upper: abundance * c,
        cv: cv2.sqrt(),
    }
}

/// Between-transect encounter-rate variance (length-weighted); with one
/// transect, falls back to Poisson variance of the count.
fn encounter_rate_cv2(data: &DistanceData) -> f64 {
    let counts = data.counts();
    let k = counts.len();
    let n: f64 = counts.iter().sum::<u64>() as f64;
    if k < 2 {
        return 1.0 / n;
    }
    let total_len = data.total_length_m();
    let er = n / total_len;
    let ss: f64 = counts
        .iter()
        .zip(&data.transect_lengths_m)
        .map(|(&c, &l)| l * l * (c as f64 / l - er).powi(2))
        .sum();
    let var = k as f64 / (total_len * total_len * (k as f64 - 1.0)) * ss;
    var / (er * er)
}

/// Delta-method CV² of the strip width from the observed information in σ.
fn esw_cv2(distances: &[f64], sigma: f64, at_edge: bool, w: f64) -> f64 {
    if at_edge {
        return 0.0;
    }
    let h = 1e-4 * sigma;
    let nll = |s: f64| neg_log_lik(distances, s, w);
    let info = (nll(sigma + h) - 2.0 * nll(sigma) + nll(sigma - h)) / (h * h);
    if !(info.is_finite() && info > 0.0) {
        return 0.0;
    }
    let esw = |s: f64| effective_strip_half_width(s, w);
    let d_esw = (esw(sigma + h) - esw(sigma - h)) / (2.0 * h);
    (d_esw / esw(sigma)).powi(2) / info
}
