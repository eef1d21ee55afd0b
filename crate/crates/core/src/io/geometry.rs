use serde::{Deserialize, Serialize};

use super::config::{GammaQuote, Parameterization};
use crate::error::{Error, Result};

/// ν = 2·halfwidth·length / area, lengths in m and area in km².
pub fn coverage_from_geometry(transect_length_m: f64, strip_halfwidth_m: f64, area_km2: f64) -> Result<f64> {
    for (name, v) in [
        ("transect length", transect_length_m),
        ("strip half-width", strip_halfwidth_m),
        ("area", area_km2),
    ] {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::Domain(format!("{name} must be positive, got {v}")));
        }
    }
    let nu = 2.0 * strip_halfwidth_m * transect_length_m / (area_km2 * 1e6);
    if nu >= 1.0 {
        return Err(Error::Design(format!(
            "strip of {transect_length_m} m × 2·{strip_halfwidth_m} m covers the whole {area_km2} km² area (ν = {nu})"
        )));
    }
    Ok(nu)
}

/// Share of the territory-packing maximum used as the prior mean of λ_G by
/// default (the published regional priors sit near a tenth of it).
pub const DEFAULT_MEAN_FRACTION: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TerritoryPrior {
    /// How many smallest territories fit in the area.
    pub max_groups: u64,
    /// Gamma(1, ·) read as shape–scale, mean = fraction × max_groups.
    pub prior: GammaQuote,
    pub note: String,
}

/// Upper bound on group count from territory packing and an exponential
/// (shape 1) Gamma prior for λ_G whose mean is `mean_fraction` of it.
pub fn territory_prior(
    area_km2: f64,
    territory_min_km2: f64,
    territory_max_km2: f64,
    mean_fraction: f64,
) -> Result<TerritoryPrior> {
    if !(area_km2 > 0.0 && territory_min_km2 > 0.0 && territory_min_km2 <= territory_max_km2) {
        return Err(Error::Domain(format!(
            "need area > 0 and 0 < min ≤ max territory, got area {area_km2}, territory {territory_min_km2}–{territory_max_km2}"
        )));
    }
    if !(mean_fraction > 0.0 && mean_fraction <= 1.0) {
        return Err(Error::Domain(format!("mean fraction must lie in (0, 1], got {mean_fraction}")));
    }
    // tolerance guards ratios like 13.9/0.02 that land a hair under an integer
    let max_groups = (area_km2 / territory_min_km2 + 1e-9).floor() as u64;
    let min_groups = (area_km2 / territory_max_km2 + 1e-9).floor() as u64;
    let scale = (mean_fraction * max_groups as f64).round().max(1.0);
    let prior = GammaQuote {
        shape: 1.0,
        parameter: scale,
        parameterization: Parameterization::Scale,
    };
    let note = format!(
        "{min_groups}–{max_groups} territories fit in {area_km2} km²; λ_G ~ Gamma(1, {scale}) read as shape–scale has mean {scale}; \
         read as shape–rate it would have mean {:.4}",
        1.0 / scale
    );
    Ok(TerritoryPrior {
        max_groups,
        prior,
        note,
    })
}
