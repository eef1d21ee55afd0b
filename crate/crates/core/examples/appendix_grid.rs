//! The factorial simulation grid (families × α treatment × λ values ×
//! priors × designs), written as CSV to stdout.
//!
//!     cargo run --release --example appendix_grid -- [scale]

use vestige::experiments::{run_appendix_grid, write_scenarios_csv, GridOptions};
use vestige::inference::McmcSettings;

fn main() -> vestige::Result<()> {
    let scale: f64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(0.1);
    let opts = GridOptions::default();
    eprintln!("{} cells × {} simulations", opts.n_cells(), opts.simulations_at(scale)?);
    let cells = run_appendix_grid(scale, &McmcSettings::experiment().with_seed(288), &opts)?;
    write_scenarios_csv(std::io::stdout().lock(), &cells)
}
