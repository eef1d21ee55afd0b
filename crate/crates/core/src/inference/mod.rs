//! Metropolis-within-Gibbs posterior sampling for the triple Poisson model,
//! with diagnostics, DIC and an exact enumeration oracle.

mod diagnostics;
mod dic;
mod enumerate;
mod kernels;
mod run;
mod settings;

pub use diagnostics::{effective_sample_size, quantile_sorted, split_rhat, summarize, ParamSummary};
pub use dic::{compute_dic, Dic};
pub use enumerate::{enumerate_posterior, PosteriorTable, TAIL_MASS_LIMIT};
pub use kernels::{
    gibbs_update_alpha, gibbs_update_lambda_g, gibbs_update_lambda_n, integer_rw_step,
    log_rw_step, MhStep, Sampler, KERNEL_NAMES,
};
pub use run::{
    chain_seed, initial_state, param, run_chain, run_mcmc, run_mcmc_with_seeds, ChainRun, Chains,
    FitResult,
};
pub use settings::McmcSettings;
