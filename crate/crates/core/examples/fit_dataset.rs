//! Fit the model to a dataset CSV with a TOML config.
//!
//!     cargo run --release --example fit_dataset -- [dataset.csv] [config.toml]
//!
//! Defaults to the peccary files in examples/data.

use std::path::PathBuf;

use vestige::commands::format_summary;
use vestige::inference::run_mcmc;
use vestige::io::{load_config, load_dataset};

fn main() -> vestige::Result<()> {
    let data_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/data");
    let mut args = std::env::args().skip(1);
    let dataset = args.next().map_or_else(|| data_dir.join("peccary.csv"), PathBuf::from);
    let config = args.next().map_or_else(|| data_dir.join("peccary.toml"), PathBuf::from);

    let data = load_dataset(&dataset)?;
    let cfg = load_config(&config)?;
    if let Some(study) = &cfg.study {
        println!("coverage from study geometry: {:?}", study.coverages()?);
    }
    let fit = run_mcmc(&data, &cfg.model.to_model_config()?, &cfg.mcmc)?;
    print!("{}", format_summary(&fit));
    println!("acceptance: {:?}", fit.acceptance_rates);
    Ok(())
}
