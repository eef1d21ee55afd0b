//! File formats, case-study presets and output writing.

mod config;
mod dataset;
mod geometry;
mod output;
mod presets;

pub use config::{load_config, ConfigFile, GammaQuote, ModelSection, Parameterization, PriorEntry, StudySection};
pub use dataset::{load_dataset, read_dataset, write_dataset, write_dataset_to, DATASET_HEADER};
pub use geometry::{coverage_from_geometry, territory_prior, TerritoryPrior, DEFAULT_MEAN_FRACTION};
pub use output::OutputDir;
pub use presets::{builtin_presets, find_preset, CaseStudyPreset, PresetData, SIKA_REGIONS};
