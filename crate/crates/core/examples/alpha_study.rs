//! How knowledge of the per-animal vestige rate α changes interval width
//! and coverage: α fixed at the truth, fixed at a wrong value, or Uniform.

use vestige::experiments::{run_alpha_study, AlphaStudyOptions};
use vestige::inference::McmcSettings;

fn main() -> vestige::Result<()> {
    let opts = AlphaStudyOptions {
        n_simulations: 20,
        ..AlphaStudyOptions::default()
    };
    let r = run_alpha_study(&McmcSettings::experiment().with_seed(35), &opts)?;
    for s in r.all() {
        println!(
            "{:<14} bias {:+.3}  coverage {:.2}  mean CrI width {:.1}",
            s.label, s.mean_relative_bias, s.coverage_rate, s.mean_interval_width
        );
    }
    Ok(())
}
