//! Densities, domain types and the joint log-posterior of the triple
//! Poisson hierarchy, plus the vestige-decay steady state that motivates
//! the availability rate α.

mod config;
mod data;
mod decay;
pub mod density;
mod posterior;
pub mod prior;

pub use config::{Family, LatentState, ModelConfig};
pub use data::{SiteRecord, SurveyDataset};
pub use decay::{accumulate_vestiges, steady_state_alpha, DecayParams};
pub use density::{log_pmf_negbin, log_pmf_poisson};
pub use posterior::{latent_log_prior, log_posterior, observation_log_lik};
pub(crate) use posterior::CountSummary;
pub use prior::PriorSpec;
