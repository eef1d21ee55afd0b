//! Exact posterior of total abundance by enumeration, next to the sampler's
//! histogram, for a small instance with every rate fixed.

use vestige::inference::{enumerate_posterior, param, run_mcmc, McmcSettings};
use vestige::model::{ModelConfig, PriorSpec, SurveyDataset};

fn main() -> vestige::Result<()> {
    let data = SurveyDataset::from_counts(&[0.5], vec![vec![6, 9]])?;
    let config = ModelConfig::poisson(PriorSpec::fixed(3.0), PriorSpec::fixed(4.0), PriorSpec::fixed(2.0));
    let table = enumerate_posterior(&data, &config, 30, 150)?;
    let exact = table.marginal_total();

    let fit = run_mcmc(&data, &config, &McmcSettings::default().with_seed(5))?;
    let draws: Vec<f64> = fit.chains[param::T].iter().flatten().copied().collect();
    let n = draws.len() as f64;
    println!(" T   exact   mcmc");
    for (t, p) in exact.iter().enumerate().filter(|(_, p)| **p > 0.005) {
        let q = draws.iter().filter(|&&x| x as usize == t).count() as f64 / n;
        println!("{t:>2}  {p:.4}  {q:.4}");
    }
    println!("exact mean {:.3}, MCMC mean {:.3}", table.mean_total(), fit.total().mean);
    Ok(())
}
