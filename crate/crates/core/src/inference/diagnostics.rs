//! Posterior summaries and convergence diagnostics over multiple chains.

use rustfft::{num_complex::Complex, FftPlanner};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamSummary {
    pub mean: f64,
    pub sd: f64,
    pub q2_5: f64,
    pub median: f64,
    pub q97_5: f64,
    /// `None` when every draw is identical.
    pub ess: Option<f64>,
    /// Split-chain R̂; only with two or more chains.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rhat: Option<f64>,
}

/// Linear-interpolation quantile (R type 7) of sorted data.
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    assert!(!sorted.is_empty());
    let h = (sorted.len() - 1) as f64 * p.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Sum in a fixed order so pooled statistics do not depend on how draws
/// were split across chains.
fn sorted_sum(sorted: &[f64]) -> f64 {
    sorted.iter().sum()
}

pub fn summarize(chains: &[Vec<f64>]) -> ParamSummary {
    let mut pooled: Vec<f64> = chains.iter().flatten().copied().collect();
    assert!(!pooled.is_empty(), "no draws to summarize");
    pooled.sort_by(f64::total_cmp);
    let n = pooled.len() as f64;
    let mean = sorted_sum(&pooled) / n;
    let mut dev: Vec<f64> = pooled.iter().map(|x| (x - mean).powi(2)).collect();
    dev.sort_by(f64::total_cmp);
    let sd = if pooled.len() > 1 {
        (sorted_sum(&dev) / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    ParamSummary {
        mean,
        sd,
        q2_5: quantile_sorted(&pooled, 0.025),
        median: quantile_sorted(&pooled, 0.5),
        q97_5: quantile_sorted(&pooled, 0.975),
        ess: effective_sample_size(chains),
        rhat: (chains.len() >= 2).then(|| split_rhat(chains)).flatten(),
    }
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn sample_var(xs: &[f64]) -> f64 {
    let m = mean(xs);
    xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() as f64 - 1.0)
}

/// Biased autocovariance at every lag via zero-padded FFT.
fn autocovariance(xs: &[f64]) -> Vec<f64> {
    let n = xs.len();
    let m = mean(xs);
    let size = (2 * n).next_power_of_two();
    let mut buf: Vec<Complex<f64>> = xs
        .iter()
        .map(|&x| Complex::new(x - m, 0.0))
        .chain(std::iter::repeat(Complex::new(0.0, 0.0)))
        .take(size)
        .collect();
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(size).process(&mut buf);
    for c in buf.iter_mut() {
        *c = Complex::new(c.norm_sqr(), 0.0);
    }
    planner.plan_fft_inverse(size).process(&mut buf);
    buf[..n]
        .iter()
        .map(|c| c.re / (size as f64 * n as f64))
        .collect()
}

fn is_constant(chains: &[Vec<f64>]) -> bool {
    let first = chains.iter().flatten().next().copied();
    match first {
        Some(v) => chains.iter().flatten().all(|&x| x == v),
        None => true,
    }
}

/// Multi-chain effective sample size with Geyer's initial monotone sequence
/// truncation of the combined autocorrelation. Chains are trimmed to the
/// shortest one; fewer than four draws per chain gives `None`.
pub fn effective_sample_size(chains: &[Vec<f64>]) -> Option<f64> {
    let m = chains.len();
    let n = chains.iter().map(Vec::len).min()?;
    if n < 4 || is_constant(chains) {
        return None;
    }
    let chains: Vec<&[f64]> = chains.iter().map(|c| &c[..n]).collect();
    let acov: Vec<Vec<f64>> = chains.iter().map(|c| autocovariance(c)).collect();
    let nf = n as f64;
    let chain_means: Vec<f64> = chains.iter().map(|c| mean(c)).collect();
    let chain_vars: Vec<f64> = acov.iter().map(|a| a[0] * nf / (nf - 1.0)).collect();
    let w = mean(&chain_vars);
    let mut var_plus = w * (nf - 1.0) / nf;
    if m > 1 {
        var_plus += sample_var(&chain_means);
    }
    if var_plus <= 0.0 {
        return None;
    }
    let rho = |t: usize| {
        let mean_acov = acov.iter().map(|a| a[t]).sum::<f64>() / m as f64;
        1.0 - (w - mean_acov) / var_plus
    };

    // Pair sums P_k = ρ_{2k} + ρ_{2k+1}, stopped at the first negative pair
    // and forced monotone non-increasing.
    let mut pairs = Vec::new();
    let mut t = 0;
    while t + 1 < n {
        let p = rho(t) + rho(t + 1);
        if p < 0.0 {
            break;
        }
        pairs.push(p);
        t += 2;
    }
    for k in 1..pairs.len() {
        if pairs[k] > pairs[k - 1] {
            pairs[k] = pairs[k - 1];
        }
    }
    let tau = (-1.0 + 2.0 * pairs.iter().sum::<f64>()).max(1.0 / (m as f64 * nf).log10());
    Some(m as f64 * nf / tau)
}

/// Gelman–Rubin potential scale reduction on split chains. Chains are
/// trimmed to the shortest one and each is cut in half (an odd middle draw
/// is dropped).
pub fn split_rhat(chains: &[Vec<f64>]) -> Option<f64> {
    let n = chains.iter().map(Vec::len).min()?;
    let half = n / 2;
    if half < 2 {
        return None;
    }
    if is_constant(chains) {
        return Some(1.0);
    }
    let mut halves: Vec<&[f64]> = Vec::with_capacity(2 * chains.len());
    for c in chains {
        halves.push(&c[..half]);
        halves.push(&c[n - half..n]);
    }
    let hf = half as f64;
    let mut means: Vec<f64> = halves.iter().map(|h| mean(h)).collect();
    let mut vars: Vec<f64> = halves.iter().map(|h| sample_var(h)).collect();
    means.sort_by(f64::total_cmp);
    vars.sort_by(f64::total_cmp);
    let w = mean(&vars);
    let b = hf * sample_var(&means);
    if w == 0.0 {
        return Some(f64::INFINITY);
    }
    let var_hat = (hf - 1.0) / hf * w + b / hf;
    Some((var_hat / w).sqrt())
}
