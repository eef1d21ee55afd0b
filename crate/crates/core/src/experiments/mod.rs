//! Simulation studies: the scarce-data comparison with distance sampling,
//! the α-knowledge study and the factorial scenario grid.

mod alpha;
mod grid;
mod metrics;
mod report;
mod scenario;
mod table1;

pub use alpha::{run_alpha_study, AlphaStudyOptions, AlphaStudyResult};
pub use grid::{run_appendix_grid, AlphaLevel, DesignLevel, FamilyLevel, GridOptions, PriorLevel};
pub use metrics::{ci_relative_bias, relative_bias};
pub use report::{write_scenarios_csv, write_scenarios_json, SCENARIO_CSV_HEADER};
pub use scenario::{
    fit_seed, run_scenario, DsGenerator, Generator, PointEstimate, ScenarioResult, ScenarioSpec,
    SimRecord, TpGenerator, MAX_FAILURE_RATE,
};
pub use table1::{run_table1, DsModel, Table1Options, Table1Result};
