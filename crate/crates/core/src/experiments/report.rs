use std::io::Write;

use super::scenario::ScenarioResult;
use crate::error::Result;

pub const SCENARIO_CSV_HEADER: [&str; 8] = [
    "label",
    "n_simulations",
    "n_failed",
    "mean_relative_bias",
    "rel_bias_ci_lower",
    "rel_bias_ci_upper",
    "coverage_rate",
    "mean_interval_width",
];

/// One row per scenario, columns as in [`SCENARIO_CSV_HEADER`].
pub fn write_scenarios_csv<W: Write>(out: W, results: &[ScenarioResult]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SCENARIO_CSV_HEADER)?;
    for r in results {
        w.write_record([
            r.label.clone(),
            r.n_simulations.to_string(),
            r.n_failed.to_string(),
            r.mean_relative_bias.to_string(),
            r.rel_bias_ci_lower.to_string(),
            r.rel_bias_ci_upper.to_string(),
            r.coverage_rate.to_string(),
            r.mean_interval_width.to_string(),
        ])?;
    }
    w.flush().map_err(|e| crate::Error::io("<csv>", e))?;
    Ok(())
}

/// Full results including per-simulation records.
pub fn write_scenarios_json<W: Write>(out: W, results: &[ScenarioResult]) -> Result<()> {
    serde_json::to_writer_pretty(out, results)?;
    Ok(())
}
