//! Fit Poisson and negative binomial observation models to overdispersed
//! simulated counts and compare DIC.

use vestige::inference::{run_mcmc, McmcSettings};
use vestige::model::{Family, ModelConfig, PriorSpec};
use vestige::rng::stream_rng;
use vestige::survey::simulate_tp_data;

fn main() -> vestige::Result<()> {
    let flat = PriorSpec::gamma(0.01, 0.01);
    let poisson = ModelConfig::poisson(flat, flat, PriorSpec::fixed(20.0));
    let negbin = poisson.with_family(Family::NegativeBinomial, Some(flat));
    let settings = McmcSettings::experiment();
    for k in 0..5 {
        let sim = simulate_tp_data(10.0, 5.0, 20.0, &[0.01; 10], 1, Family::NegativeBinomial, Some(0.2), &mut stream_rng(40, k))?;
        let p = run_mcmc(&sim.data, &poisson, &settings.clone().with_seed(k))?;
        let n = run_mcmc(&sim.data, &negbin, &settings.clone().with_seed(k))?;
        println!(
            "dataset {k}: DIC poisson {:8.2}  negbin {:8.2}  → {}",
            p.dic,
            n.dic,
            if n.dic < p.dic { "negbin" } else { "poisson" }
        );
    }
    Ok(())
}
