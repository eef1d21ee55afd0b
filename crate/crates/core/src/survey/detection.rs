use std::f64::consts::{FRAC_PI_2, SQRT_2};

use argmin::core::{CostFunction, Executor};
use argmin::solver::brent::BrentRoot;
use serde::{Deserialize, Serialize};
use statrs::function::erf::erf;

use crate::error::{Error, Result};

/// g(x) = exp(−x²/2σ²)
pub fn half_normal_detection(x: f64, sigma: f64) -> f64 {
    (-x * x / (2.0 * sigma * sigma)).exp()
}

/// ∫₀ʷ g(x) dx by adaptive Simpson quadrature (absolute tolerance 1e-10).
pub fn effective_strip_half_width(sigma: f64, w: f64) -> f64 {
    let f = |x: f64| half_normal_detection(x, sigma);
    adaptive_simpson(&f, 0.0, w, 1e-10)
}

fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    let (fa, fb) = (f(a), f(b));
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, 50)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}

/// Closed form of the strip integral, used inside the likelihood.
fn esw_erf(sigma: f64, w: f64) -> f64 {
    sigma * FRAC_PI_2.sqrt() * erf(w / (sigma * SQRT_2))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SigmaEstimate {
    pub sigma: f64,
    /// The estimate sits on the search bracket, so the true maximizer lies
    /// outside it (e.g. all distances at zero, or detection flat to w).
    pub at_bracket_edge: bool,
}

/// Search bracket for σ, relative to w.
const BRACKET: (f64, f64) = (1e-4, 1e4);

/// E[x²] under the half-normal truncated at w: σ²(1 − w·g(w)/esw).
fn truncated_second_moment(sigma: f64, w: f64) -> f64 {
    sigma * sigma * (1.0 - w * half_normal_detection(w, sigma) / esw_erf(sigma, w))
}

struct Score {
    w: f64,
    mean_sq: f64,
}

impl CostFunction for Score {
    type Param = f64;
    type Output = f64;

    fn cost(&self, log_sigma: &f64) -> std::result::Result<f64, argmin::core::Error> {
        Ok(truncated_second_moment(log_sigma.exp(), self.w) - self.mean_sq)
    }
}

/// Maximum-likelihood σ of a half-normal detection function truncated at
/// `w`.
///
/// The truncated half-normal is an exponential family in 1/σ², so the
/// likelihood is unimodal and its maximizer is the unique root of
/// E_σ[x²] = mean(x²). The root is bracketed in log σ and found with
/// Brent's method to 1e-12, well inside 1e-8 relative.
pub fn half_normal_mle(distances: &[f64], w: f64) -> Result<SigmaEstimate> {
    if !(w.is_finite() && w > 0.0) {
        return Err(Error::Domain(format!("truncation must be positive, got {w}")));
    }
    if distances.len() < 2 {
        return Err(Error::Estimation(format!(
            "need at least 2 distances to fit a detection function, got {}",
            distances.len()
        )));
    }
    if let Some(x) = distances.iter().find(|&&x| !(0.0..=w).contains(&x)) {
        return Err(Error::Data(format!("distance {x} outside [0, {w}]")));
    }
    let mean_sq = distances.iter().map(|x| x * x).sum::<f64>() / distances.len() as f64;
    let score = Score { w, mean_sq };
    let (lo, hi) = ((BRACKET.0 * w).ln(), (BRACKET.1 * w).ln());
    let (f_lo, f_hi) = (score.cost(&lo).unwrap(), score.cost(&hi).unwrap());
    if f_lo >= 0.0 {
        return Ok(SigmaEstimate {
            sigma: lo.exp(),
            at_bracket_edge: true,
        });
    }
    if f_hi <= 0.0 {
        return Ok(SigmaEstimate {
            sigma: hi.exp(),
            at_bracket_edge: true,
        });
    }
    let res = Executor::new(score, BrentRoot::new(lo, hi, 1e-12))
        .configure(|s| s.max_iters(200))
        .run()
        .map_err(|e| Error::Estimation(format!("detection-function fit failed: {e}")))?;
    let log_sigma = res
        .state
        .best_param
        .ok_or_else(|| Error::Estimation("detection-function fit returned no estimate".into()))?;
    Ok(SigmaEstimate {
        sigma: log_sigma.exp(),
        at_bracket_edge: false,
    })
}

/// Negative log-likelihood of the truncated half-normal.
pub(crate) fn neg_log_lik(distances: &[f64], sigma: f64, w: f64) -> f64 {
    let n = distances.len() as f64;
    let ss: f64 = distances.iter().map(|x| x * x).sum();
    n * esw_erf(sigma, w).ln() + ss / (2.0 * sigma * sigma)
}
