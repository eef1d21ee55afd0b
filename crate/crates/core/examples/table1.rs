//! Triple Poisson against distance sampling on simulated surveys, with
//! correct and misspecified vestige production and decay.
//!
//!     cargo run --release --example table1 -- [n_simulations]

use vestige::experiments::{run_table1, Table1Options};
use vestige::inference::McmcSettings;

fn main() -> vestige::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(20);
    let t = run_table1(n, &McmcSettings::experiment().with_seed(1), &Table1Options::default())?;
    println!("true abundance {:.2}, {n} surveys", t.n_true);
    for r in t.all() {
        println!(
            "{:<4} bias {:+.3}  CI bias ({:+.3}, {:+.3})  coverage {:.2}",
            r.label, r.mean_relative_bias, r.rel_bias_ci_lower, r.rel_bias_ci_upper, r.coverage_rate
        );
    }
    Ok(())
}
