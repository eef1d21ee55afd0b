//! Synthetic line-transect surveys and the distance-sampling comparator.

mod design;
mod detection;
mod estimate;
mod tp;

pub use design::{simulate_survey, DistanceData, SurveyDesign, SurveySimulation};
pub use detection::{
    effective_strip_half_width, half_normal_detection, half_normal_mle, SigmaEstimate,
};
pub use estimate::{
    abundance_from_vestige_density, ds_abundance, ds_abundance_known_sigma, DsEstimate,
};
pub use tp::{simulate_counts, simulate_tp_data, TpSimulation};
