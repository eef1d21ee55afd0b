//! Update kernels of the Metropolis-within-Gibbs sweep.
//!
//! λ_G and λ_N (Gamma priors) and α (Poisson family, Gamma prior) have
//! Gamma full conditionals and are drawn exactly. Everything else moves by
//! random-walk Metropolis: integer steps for G and T, log-scale steps for
//! the positive reals. Two joint moves walk along the ridges the likelihood
//! cannot resolve (α·T and G·λ_N), where one-at-a-time updates crawl.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::settings::McmcSettings;
use crate::error::{Error, Result};
use crate::model::density::poisson_unchecked;
use crate::model::prior::sample_gamma;
use crate::model::{
    latent_log_prior, CountSummary, Family, LatentState, ModelConfig, PriorSpec, SurveyDataset,
};

const TARGET_ACCEPTANCE: f64 = 0.44;
/// Integer random walks below this scale almost never leave the current
/// point, which would also starve the tuner of feedback.
const MIN_INTEGER_SCALE: f64 = 0.5;
/// Starting step of the ridge moves as a fraction of the current count.
const RIDGE_FRACTION: f64 = 0.1;

/// Outcome of one Metropolis proposal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MhStep<T> {
    pub value: T,
    pub log_target: f64,
    pub accepted: bool,
}

#[inline]
fn accept<R: Rng + ?Sized>(log_ratio: f64, rng: &mut R) -> bool {
    if log_ratio >= 0.0 {
        return true;
    }
    if log_ratio.is_nan() || log_ratio == f64::NEG_INFINITY {
        return false;
    }
    rng.random::<f64>().ln() < log_ratio
}

#[inline]
fn integer_step<R: Rng + ?Sized>(scale: f64, rng: &mut R) -> i64 {
    let z: f64 = StandardNormal.sample(rng);
    (z * scale).round() as i64
}

fn relative_reach(x: u64, frac: f64) -> i64 {
    ((frac * x as f64).round() as i64).max(1)
}

/// Integer step proportional to the current value: `d` uniform on
/// `±k(x)` without zero, `k(x) = max(1, round(frac·x))`. Returns the
/// proposal and the log Hastings correction `ln k(x) − ln k(x')`, or `None`
/// for proposals below one or outside the reverse move's reach.
fn relative_step<R: Rng + ?Sized>(current: u64, frac: f64, rng: &mut R) -> Option<(u64, f64)> {
    let k = relative_reach(current, frac);
    let mut d = rng.random_range(-k..k);
    if d >= 0 {
        d += 1;
    }
    let proposed = current as i64 + d;
    if proposed < 1 {
        return None;
    }
    let proposed = proposed as u64;
    let back = relative_reach(proposed, frac);
    (d.abs() <= back).then(|| (proposed, (k as f64).ln() - (back as f64).ln()))
}

/// Symmetric integer random walk: `x' = x + round(N(0, scale²))`.
/// Returns `None` when the rounded step is zero (nothing was proposed).
/// Negative proposals are rejected without evaluating the target.
pub fn integer_rw_step<R, F>(
    current: u64,
    current_log_target: f64,
    scale: f64,
    mut log_target: F,
    rng: &mut R,
) -> Option<MhStep<u64>>
where
    R: Rng + ?Sized,
    F: FnMut(u64) -> f64,
{
    let step = integer_step(scale, rng);
    if step == 0 {
        return None;
    }
    let proposed = current as i64 + step;
    let rejected = MhStep {
        value: current,
        log_target: current_log_target,
        accepted: false,
    };
    if proposed < 0 {
        return Some(rejected);
    }
    let proposed = proposed as u64;
    let lp = log_target(proposed);
    if accept(lp - current_log_target, rng) {
        Some(MhStep {
            value: proposed,
            log_target: lp,
            accepted: true,
        })
    } else {
        Some(rejected)
    }
}

/// Random walk on `ln x` for a positive parameter; the Jacobian `x` of the
/// log transform is included in the acceptance ratio.
pub fn log_rw_step<R, F>(
    current: f64,
    current_log_target: f64,
    scale: f64,
    mut log_target: F,
    rng: &mut R,
) -> MhStep<f64>
where
    R: Rng + ?Sized,
    F: FnMut(f64) -> f64,
{
    let z: f64 = StandardNormal.sample(rng);
    let proposed = current * (scale * z).exp();
    let lp = if proposed > 0.0 && proposed.is_finite() {
        log_target(proposed)
    } else {
        f64::NEG_INFINITY
    };
    let log_ratio = lp + proposed.ln() - current_log_target - current.ln();
    if accept(log_ratio, rng) {
        MhStep {
            value: proposed,
            log_target: lp,
            accepted: true,
        }
    } else {
        MhStep {
            value: current,
            log_target: current_log_target,
            accepted: false,
        }
    }
}

/// Conjugate draw of λ_G from `Gamma(a + G, b + 1)`. `Fixed` priors return
/// the pinned value; `None` means the prior has no conjugate form.
pub fn gibbs_update_lambda_g<R: Rng + ?Sized>(
    state: &LatentState,
    config: &ModelConfig,
    rng: &mut R,
) -> Option<f64> {
    match config.prior_lambda_g {
        PriorSpec::Gamma { shape, rate } => {
            Some(sample_gamma(shape + state.groups as f64, rate + 1.0, rng))
        }
        PriorSpec::Fixed { value } => Some(value),
        PriorSpec::Uniform { .. } => None,
    }
}

/// Conjugate draw of λ_N from `Gamma(a + T, b + G)`; with no groups the
/// prior is returned unchanged.
pub fn gibbs_update_lambda_n<R: Rng + ?Sized>(
    state: &LatentState,
    config: &ModelConfig,
    rng: &mut R,
) -> Option<f64> {
    match config.prior_lambda_n {
        PriorSpec::Gamma { shape, rate } => Some(sample_gamma(
            shape + state.total as f64,
            rate + state.groups as f64,
            rng,
        )),
        PriorSpec::Fixed { value } => Some(value),
        PriorSpec::Uniform { .. } => None,
    }
}

/// Exact draw of α where one exists: Poisson family with a Gamma prior gives
/// `Gamma(a + Σy, b + T·Σν)`; `T = 0` leaves only the prior.
pub fn gibbs_update_alpha<R: Rng + ?Sized>(
    state: &LatentState,
    data: &SurveyDataset,
    config: &ModelConfig,
    rng: &mut R,
) -> Option<f64> {
    alpha_conjugate(
        state,
        data.total_count() as f64,
        data.total_coverage(),
        config,
        rng,
    )
}

fn alpha_conjugate<R: Rng + ?Sized>(
    state: &LatentState,
    sum_y: f64,
    sum_nu: f64,
    config: &ModelConfig,
    rng: &mut R,
) -> Option<f64> {
    let prior = config.prior_alpha;
    if let PriorSpec::Fixed { value } = prior {
        return Some(value);
    }
    if state.total == 0 {
        return Some(prior.sample(rng));
    }
    match (config.family, prior) {
        (Family::Poisson, PriorSpec::Gamma { shape, rate }) => Some(sample_gamma(
            shape + sum_y,
            rate + state.total as f64 * sum_nu,
            rng,
        )),
        _ => None,
    }
}

/// Robbins–Monro tuner for one random-walk scale.
#[derive(Debug, Clone)]
struct Tuner {
    log_scale: f64,
    min_log_scale: f64,
    window_tried: u32,
    window_accepted: u32,
    windows: u32,
    kept_tried: u64,
    kept_accepted: u64,
}

impl Tuner {
    fn new(scale: f64, min_scale: f64) -> Self {
        Self {
            log_scale: scale.max(min_scale).ln(),
            min_log_scale: min_scale.ln(),
            window_tried: 0,
            window_accepted: 0,
            windows: 0,
            kept_tried: 0,
            kept_accepted: 0,
        }
    }

    fn scale(&self) -> f64 {
        self.log_scale.exp()
    }

    fn record(&mut self, accepted: bool, keeping: bool) {
        if keeping {
            self.kept_tried += 1;
            self.kept_accepted += accepted as u64;
        } else {
            self.window_tried += 1;
            self.window_accepted += accepted as u32;
        }
    }

    fn end_window(&mut self) {
        if self.window_tried > 0 {
            self.windows += 1;
            let rate = self.window_accepted as f64 / self.window_tried as f64;
            let gain = 2.0 / (self.windows as f64).sqrt();
            self.log_scale = (self.log_scale + gain * (rate - TARGET_ACCEPTANCE))
                .clamp(self.min_log_scale, 12.0);
        }
        self.window_tried = 0;
        self.window_accepted = 0;
    }

    fn acceptance(&self) -> Option<f64> {
        (self.kept_tried > 0).then(|| self.kept_accepted as f64 / self.kept_tried as f64)
    }
}

/// Names under which kernel acceptance rates are reported.
pub const KERNEL_NAMES: [&str; 8] = [
    "lambda_G", "lambda_N", "alpha", "G", "T", "phi", "T_alpha", "G_lambda",
];

/// One chain's update machinery: the model, cached data summaries and the
/// tuned random-walk scales.
#[derive(Debug, Clone)]
pub struct Sampler<'a> {
    config: &'a ModelConfig,
    summary: CountSummary,
    conjugate: bool,
    nb_coef: Option<(f64, f64)>,
    keeping: bool,
    tuners: [Tuner; 8],
}

const LG: usize = 0;
const LN: usize = 1;
const ALPHA: usize = 2;
const G: usize = 3;
const T: usize = 4;
const PHI: usize = 5;
const RIDGE_T: usize = 6;
const RIDGE_G: usize = 7;

impl<'a> Sampler<'a> {
    pub fn new(data: &SurveyDataset, config: &'a ModelConfig, settings: &McmcSettings) -> Result<Self> {
        config.validate()?;
        settings.validate()?;
        let cont = |s: f64| Tuner::new(s, 1e-4);
        let int = |s: f64| Tuner::new(s, MIN_INTEGER_SCALE);
        Ok(Self {
            config,
            summary: CountSummary::new(data),
            conjugate: settings.conjugate_updates,
            nb_coef: None,
            keeping: false,
            tuners: [
                cont(0.5),
                cont(0.5),
                cont(settings.rw_scale_logalpha),
                int(settings.rw_scale_g),
                int(settings.rw_scale_t),
                cont(settings.rw_scale_logphi),
                cont(RIDGE_FRACTION),
                cont(RIDGE_FRACTION),
            ],
        })
    }

    pub fn config(&self) -> &ModelConfig {
        self.config
    }

    /// Stop tuning and start counting acceptances toward the reported rates.
    pub fn start_keeping(&mut self) {
        self.keeping = true;
    }

    pub fn end_adapt_window(&mut self) {
        for t in &mut self.tuners {
            t.end_window();
        }
    }

    pub fn scales(&self) -> Vec<(&'static str, f64)> {
        KERNEL_NAMES
            .iter()
            .zip(&self.tuners)
            .map(|(n, t)| (*n, t.scale()))
            .collect()
    }

    /// Post-burn-in acceptance rate of every kernel that made a proposal.
    pub fn acceptance_rates(&self) -> Vec<(&'static str, f64)> {
        KERNEL_NAMES
            .iter()
            .zip(&self.tuners)
            .filter_map(|(n, t)| t.acceptance().map(|a| (*n, a)))
            .collect()
    }

    fn nb_coef(&mut self, phi: f64) -> f64 {
        match self.nb_coef {
            Some((p, c)) if p == phi => c,
            _ => {
                let c = self.summary.negbin_coef(phi);
                self.nb_coef = Some((phi, c));
                c
            }
        }
    }

    /// Observation log-likelihood through the cached sufficient statistics.
    pub fn observation_log_lik(&mut self, total: u64, alpha: f64, phi: Option<f64>) -> f64 {
        let scale = alpha * total as f64;
        match self.config.family {
            Family::Poisson => self.summary.poisson(scale),
            Family::NegativeBinomial => {
                let phi = phi.expect("validated state carries phi");
                let coef = self.nb_coef(phi);
                self.summary.negbin(scale, phi, coef)
            }
        }
    }

    fn log_rw_kernel<R, F>(&mut self, idx: usize, current: f64, log_target: F, rng: &mut R) -> f64
    where
        R: Rng + ?Sized,
        F: FnMut(f64) -> f64,
    {
        let mut log_target = log_target;
        let lp = log_target(current);
        let step = log_rw_step(current, lp, self.tuners[idx].scale(), log_target, rng);
        self.tuners[idx].record(step.accepted, self.keeping);
        step.value
    }

    pub fn update_lambda_g<R: Rng + ?Sized>(&mut self, state: &mut LatentState, rng: &mut R) {
        if let Some(v) = gibbs_update_lambda_g(state, self.config, rng) {
            state.lambda_g = v;
            return;
        }
        let prior = self.config.prior_lambda_g;
        let groups = state.groups;
        state.lambda_g = self.log_rw_kernel(
            LG,
            state.lambda_g,
            |l| prior.log_density(l) + poisson_unchecked(groups, l),
            rng,
        );
    }

    pub fn update_lambda_n<R: Rng + ?Sized>(&mut self, state: &mut LatentState, rng: &mut R) {
        if let Some(v) = gibbs_update_lambda_n(state, self.config, rng) {
            state.lambda_n = v;
            return;
        }
        let prior = self.config.prior_lambda_n;
        let (groups, total) = (state.groups as f64, state.total);
        state.lambda_n = self.log_rw_kernel(
            LN,
            state.lambda_n,
            |l| prior.log_density(l) + poisson_unchecked(total, groups * l),
            rng,
        );
    }

    pub fn update_alpha<R: Rng + ?Sized>(&mut self, state: &mut LatentState, rng: &mut R) {
        if self.conjugate || self.config.prior_alpha.is_fixed() || state.total == 0 {
            if let Some(v) = alpha_conjugate(
                state,
                self.summary.sum_y(),
                self.summary.sum_nu(),
                self.config,
                rng,
            ) {
                state.alpha = v;
                return;
            }
        }
        let prior = self.config.prior_alpha;
        let (total, phi) = (state.total, state.phi);
        let current = state.alpha;
        let lp = prior.log_density(current) + self.observation_log_lik(total, current, phi);
        let scale = self.tuners[ALPHA].scale();
        let step = log_rw_step(
            current,
            lp,
            scale,
            |a| {
                let p = prior.log_density(a);
                if p == f64::NEG_INFINITY {
                    return p;
                }
                p + self.observation_log_lik(total, a, phi)
            },
            rng,
        );
        self.tuners[ALPHA].record(step.accepted, self.keeping);
        state.alpha = step.value;
    }

    /// Integer random walk on the number of groups; G = 0 with animals
    /// present has zero prior mass and is never accepted.
    pub fn mh_update_groups<R: Rng + ?Sized>(&mut self, state: &mut LatentState, rng: &mut R) {
        let (total, lg, ln) = (state.total, state.lambda_g, state.lambda_n);
        let target = |g: u64| latent_log_prior(g, total, lg, ln);
        let lp = target(state.groups);
        if let Some(step) = integer_rw_step(state.groups, lp, self.tuners[G].scale(), target, rng) {
            self.tuners[G].record(step.accepted, self.keeping);
            state.groups = step.value;
        }
    }

    /// Integer random walk on total abundance against the latent prior and
    /// the observation likelihood.
    pub fn mh_update_total<R: Rng + ?Sized>(&mut self, state: &mut LatentState, rng: &mut R) {
        let (groups, lg, ln, alpha, phi) =
            (state.groups, state.lambda_g, state.lambda_n, state.alpha, state.phi);
        let lp = latent_log_prior(groups, state.total, lg, ln)
            + self.observation_log_lik(state.total, alpha, phi);
        let scale = self.tuners[T].scale();
        let step = integer_rw_step(
            state.total,
            lp,
            scale,
            |t| {
                let p = latent_log_prior(groups, t, lg, ln);
                if p == f64::NEG_INFINITY {
                    return p;
                }
                p + self.observation_log_lik(t, alpha, phi)
            },
            rng,
        );
        if let Some(step) = step {
            self.tuners[T].record(step.accepted, self.keeping);
            state.total = step.value;
        }
    }

    /// Log-scale random walk on the dispersion.
    pub fn mh_update_phi<R: Rng + ?Sized>(&mut self, state: &mut LatentState, rng: &mut R) -> Result<()> {
        if self.config.family != Family::NegativeBinomial {
            return Err(Error::Config(
                "dispersion update requested under the Poisson family".into(),
            ));
        }
        let prior = self.config.prior_phi.expect("validated config");
        let current = state
            .phi
            .ok_or_else(|| Error::Config("negative binomial state without phi".into()))?;
        if let Some(v) = prior.fixed_value() {
            state.phi = Some(v);
            return Ok(());
        }
        let (total, alpha) = (state.total, state.alpha);
        let scale = alpha * total as f64;
        let lp = prior.log_density(current) + self.observation_log_lik(total, alpha, Some(current));
        let summary = &self.summary;
        let step = log_rw_step(
            current,
            lp,
            self.tuners[PHI].scale(),
            |p| {
                let pr = prior.log_density(p);
                if pr == f64::NEG_INFINITY {
                    return pr;
                }
                pr + summary.negbin(scale, p, summary.negbin_coef(p))
            },
            rng,
        );
        self.tuners[PHI].record(step.accepted, self.keeping);
        state.phi = Some(step.value);
        Ok(())
    }

    /// Joint move `T → T'` with `α → α·T/T'` and, when λ_N is free,
    /// `λ_N → λ_N·T'/T`. The expected counts stay put and `T | G` keeps its
    /// relative position, so the chain can travel along the α·T ridge across
    /// orders of magnitude. Steps scale with T.
    pub fn ridge_update_total_alpha<R: Rng + ?Sized>(&mut self, state: &mut LatentState, rng: &mut R) {
        if self.config.prior_alpha.is_fixed() || state.total == 0 {
            return;
        }
        let frac = self.tuners[RIDGE_T].scale();
        // at small counts the reach is one step whatever the fraction, so
        // those proposals say nothing about how to tune it
        let informative = relative_reach(state.total, frac) > 1;
        let accepted = match relative_step(state.total, frac, rng) {
            None => false,
            Some((t_new, log_q)) => {
                let r = t_new as f64 / state.total as f64;
                let alpha_new = state.alpha / r;
                let pa = self.config.prior_alpha;
                let pn = self.config.prior_lambda_n;
                let scale_ln = !pn.is_fixed();
                let ln_new = if scale_ln { state.lambda_n * r } else { state.lambda_n };
                // α and λ_N scale inversely, so their Jacobians cancel
                let log_jac = if scale_ln { 0.0 } else { -r.ln() };
                let log_ratio = pa.log_density(alpha_new) - pa.log_density(state.alpha)
                    + pn.log_density(ln_new)
                    - pn.log_density(state.lambda_n)
                    + latent_log_prior(state.groups, t_new, state.lambda_g, ln_new)
                    - latent_log_prior(state.groups, state.total, state.lambda_g, state.lambda_n)
                    + log_jac
                    + log_q;
                let ok = accept(log_ratio, rng);
                if ok {
                    state.total = t_new;
                    state.alpha = alpha_new;
                    state.lambda_n = ln_new;
                }
                ok
            }
        };
        if informative {
            self.tuners[RIDGE_T].record(accepted, self.keeping);
        }
    }

    /// Joint move `G → G'` with `λ_N → λ_N·G/G'` (and `λ_G → λ_G·G'/G`
    /// when λ_G is free), leaving `G·λ_N` and hence `T | G` unchanged.
    /// Steps scale with G.
    pub fn ridge_update_groups_rates<R: Rng + ?Sized>(&mut self, state: &mut LatentState, rng: &mut R) {
        if self.config.prior_lambda_n.is_fixed() || state.groups == 0 {
            return;
        }
        let frac = self.tuners[RIDGE_G].scale();
        let informative = relative_reach(state.groups, frac) > 1;
        let accepted = match relative_step(state.groups, frac, rng) {
            None => false,
            Some((g_new_u, log_q)) => {
                let g = state.groups as f64;
                let g_new = g_new_u as f64;
                let ln_new = state.lambda_n * g / g_new;
                let scale_lg = !self.config.prior_lambda_g.is_fixed();
                let lg_new = if scale_lg {
                    state.lambda_g * g_new / g
                } else {
                    state.lambda_g
                };
                let pg = self.config.prior_lambda_g;
                let pn = self.config.prior_lambda_n;
                let log_jac = if scale_lg { 0.0 } else { (g / g_new).ln() };
                let log_ratio = pn.log_density(ln_new) - pn.log_density(state.lambda_n)
                    + pg.log_density(lg_new)
                    - pg.log_density(state.lambda_g)
                    + latent_log_prior(g_new_u, state.total, lg_new, ln_new)
                    - latent_log_prior(state.groups, state.total, state.lambda_g, state.lambda_n)
                    + log_jac
                    + log_q;
                let ok = accept(log_ratio, rng);
                if ok {
                    state.groups = g_new_u;
                    state.lambda_n = ln_new;
                    state.lambda_g = lg_new;
                }
                ok
            }
        };
        if informative {
            self.tuners[RIDGE_G].record(accepted, self.keeping);
        }
    }

    /// One full sweep over every kernel.
    pub fn sweep<R: Rng + ?Sized>(&mut self, state: &mut LatentState, rng: &mut R) -> Result<()> {
        self.update_lambda_g(state, rng);
        self.update_lambda_n(state, rng);
        self.update_alpha(state, rng);
        self.mh_update_groups(state, rng);
        self.mh_update_total(state, rng);
        if self.config.family == Family::NegativeBinomial {
            self.mh_update_phi(state, rng)?;
        }
        self.ridge_update_total_alpha(state, rng);
        self.ridge_update_groups_rates(state, rng);
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_rng;

    fn mean_var(xs: &[f64]) -> (f64, f64) {
        let n = xs.len() as f64;
        let m = xs.iter().sum::<f64>() / n;
        let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
        (m, v)
    }

    fn state(groups: u64, total: u64) -> LatentState {
        LatentState {
            groups,
            total,
            lambda_g: 3.0,
            lambda_n: 4.0,
            alpha: 2.0,
            phi: None,
        }
    }

    fn gamma_cfg() -> ModelConfig {
        ModelConfig::poisson(
            PriorSpec::gamma(2.0, 1.0),
            PriorSpec::gamma(5.0, 1.0),
            PriorSpec::gamma(0.01, 0.01),
        )
    }

    #[test]
    fn fixed_priors_are_no_ops() {
        let cfg = ModelConfig::poisson(
            PriorSpec::fixed(3.0),
            PriorSpec::fixed(4.5),
            PriorSpec::fixed(2.5),
        );
        let d = SurveyDataset::from_counts(&[0.5], vec![vec![3]]).unwrap();
        let mut rng = stream_rng(0, 0);
        let s = state(2, 10);
        assert_eq!(gibbs_update_lambda_g(&s, &cfg, &mut rng), Some(3.0));
        assert_eq!(gibbs_update_lambda_n(&s, &cfg, &mut rng), Some(4.5));
        assert_eq!(gibbs_update_alpha(&s, &d, &cfg, &mut rng), Some(2.5));
    }

    #[test]
    fn lambda_g_conditional_mean() {
        // Gamma(2 + 8, 1 + 1): mean 5
        let mut rng = stream_rng(11, 0);
        let s = state(8, 30);
        let cfg = gamma_cfg();
        let xs: Vec<f64> = (0..100_000)
            .map(|_| gibbs_update_lambda_g(&s, &cfg, &mut rng).unwrap())
            .collect();
        let (m, _) = mean_var(&xs);
        assert!((m - 5.0).abs() / 5.0 < 0.02, "{m}");
    }

    #[test]
    fn lambda_n_without_groups_is_prior() {
        let mut rng = stream_rng(12, 0);
        let s = state(0, 0);
        let cfg = gamma_cfg();
        let xs: Vec<f64> = (0..50_000)
            .map(|_| gibbs_update_lambda_n(&s, &cfg, &mut rng).unwrap())
            .collect();
        let (m, v) = mean_var(&xs);
        assert!((m - 5.0).abs() / 5.0 < 0.02 && (v - 5.0).abs() / 5.0 < 0.05, "{m} {v}");
    }

    #[test]
    fn uniform_priors_have_no_conjugate() {
        let cfg = ModelConfig::poisson(
            PriorSpec::uniform(1.0, 100.0),
            PriorSpec::uniform(1.0, 100.0),
            PriorSpec::uniform(0.0, 112.0),
        );
        let d = SurveyDataset::from_counts(&[0.5], vec![vec![3]]).unwrap();
        let mut rng = stream_rng(0, 0);
        let s = state(2, 10);
        assert!(gibbs_update_lambda_g(&s, &cfg, &mut rng).is_none());
        assert!(gibbs_update_lambda_n(&s, &cfg, &mut rng).is_none());
        assert!(gibbs_update_alpha(&s, &d, &cfg, &mut rng).is_none());
    }

    #[test]
    fn alpha_conjugate_parameters() {
        // Gamma(0.01 + 10, 0.01 + 10·(0.5 + 0.5)) = Gamma(10.01, 10.01)
        let d = SurveyDataset::from_counts(&[0.5], vec![vec![3, 7]]).unwrap();
        let cfg = gamma_cfg();
        let s = state(2, 10);
        let mut rng = stream_rng(13, 0);
        let xs: Vec<f64> = (0..100_000)
            .map(|_| gibbs_update_alpha(&s, &d, &cfg, &mut rng).unwrap())
            .collect();
        let (m, v) = mean_var(&xs);
        assert!((m - 1.0).abs() < 0.01, "{m}");
        let var = 10.01 / (10.01f64 * 10.01);
        assert!((v - var).abs() / var < 0.03, "{v} vs {var}");
    }

    #[test]
    fn negative_integer_proposal_rejected() {
        let mut rng = stream_rng(1, 0);
        let mut saw_negative = false;
        for _ in 0..200 {
            if let Some(step) = integer_rw_step(0, 0.0, 5.0, |_| 0.0, &mut rng) {
                if !step.accepted {
                    saw_negative = true;
                    assert_eq!(step.value, 0);
                }
            }
        }
        assert!(saw_negative);
    }

    #[test]
    fn integer_kernel_three_state_balance() {
        // target ∝ (1, 3, 6) on {0, 1, 2}, −∞ elsewhere
        let weights = [1.0f64, 3.0, 6.0];
        let target = |x: u64| {
            weights
                .get(x as usize)
                .map_or(f64::NEG_INFINITY, |w| w.ln())
        };
        let mut rng = stream_rng(99, 0);
        let mut x = 0u64;
        let mut lp = target(x);
        let mut hits = [0u64; 3];
        let steps = 1_000_000;
        for _ in 0..steps {
            if let Some(s) = integer_rw_step(x, lp, 1.0, target, &mut rng) {
                x = s.value;
                lp = s.log_target;
            }
            hits[x as usize] += 1;
        }
        let tv: f64 = hits
            .iter()
            .zip(weights)
            .map(|(&h, w)| (h as f64 / steps as f64 - w / 10.0).abs())
            .sum::<f64>()
            / 2.0;
        assert!(tv < 0.02, "tv {tv}");
    }

    #[test]
    fn log_kernel_targets_gamma() {
        // Gamma(3, 2): mean 1.5, variance 0.75
        let target = |x: f64| 2.0 * x.ln() - 2.0 * x;
        let mut rng = stream_rng(5, 0);
        let mut x = 1.0;
        let mut lp = target(x);
        let mut xs = Vec::with_capacity(400_000);
        for _ in 0..400_000 {
            let s = log_rw_step(x, lp, 0.8, target, &mut rng);
            x = s.value;
            lp = s.log_target;
            xs.push(x);
        }
        let (m, v) = mean_var(&xs);
        assert!((m - 1.5).abs() / 1.5 < 0.03, "{m}");
        assert!((v - 0.75).abs() / 0.75 < 0.06, "{v}");
    }

    #[test]
    fn phi_update_under_poisson_is_error() {
        let cfg = gamma_cfg();
        let d = SurveyDataset::from_counts(&[0.5], vec![vec![3]]).unwrap();
        let mut sampler = Sampler::new(&d, &cfg, &McmcSettings::default()).unwrap();
        let mut s = state(2, 10);
        s.phi = Some(1.0);
        let mut rng = stream_rng(0, 0);
        assert!(matches!(sampler.mh_update_phi(&mut s, &mut rng), Err(Error::Config(_))));
    }

    #[test]
    fn phi_fixed_is_no_op() {
        let g = PriorSpec::gamma(1.0, 1.0);
        let cfg = ModelConfig::negbin(g, g, g, PriorSpec::fixed(0.7));
        let d = SurveyDataset::from_counts(&[0.5], vec![vec![3]]).unwrap();
        let mut sampler = Sampler::new(&d, &cfg, &McmcSettings::default()).unwrap();
        let mut s = state(2, 10);
        s.phi = Some(0.7);
        let mut rng = stream_rng(0, 0);
        for _ in 0..10 {
            sampler.mh_update_phi(&mut s, &mut rng).unwrap();
            assert_eq!(s.phi, Some(0.7));
        }
    }

    #[test]
    fn uniform_alpha_stays_in_support() {
        let cfg = ModelConfig::poisson(
            PriorSpec::gamma(2.0, 1.0),
            PriorSpec::gamma(5.0, 1.0),
            PriorSpec::uniform(0.0, 112.0),
        );
        let d = SurveyDataset::from_counts(&[0.01, 0.02], vec![vec![30], vec![70]]).unwrap();
        let settings = McmcSettings {
            rw_scale_logalpha: 3.0,
            ..McmcSettings::default()
        };
        let mut sampler = Sampler::new(&d, &cfg, &settings).unwrap();
        let mut s = state(3, 20);
        s.alpha = 100.0;
        let mut rng = stream_rng(8, 0);
        for _ in 0..5_000 {
            sampler.sweep(&mut s, &mut rng).unwrap();
            assert!(s.alpha > 0.0 && s.alpha < 112.0, "{}", s.alpha);
        }
    }

    #[test]
    fn fast_likelihood_matches_model() {
        let g = PriorSpec::gamma(1.0, 1.0);
        let cfg = ModelConfig::negbin(g, g, g, g);
        let d = SurveyDataset::from_counts(&[0.01, 0.02], vec![vec![3, 0], vec![7, 12]]).unwrap();
        let mut sampler = Sampler::new(&d, &cfg, &McmcSettings::default()).unwrap();
        for &(t, a, p) in &[(10u64, 20.0, 0.3), (55, 3.0, 2.0), (1, 100.0, 50.0)] {
            let fast = sampler.observation_log_lik(t, a, Some(p));
            let slow = crate::model::observation_log_lik(&d, t, a, Some(p), Family::NegativeBinomial)
                .unwrap();
            assert!((fast - slow).abs() < 1e-9 * slow.abs().max(1.0));
        }
    }
}
