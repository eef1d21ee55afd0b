//! Draw data from the triple Poisson hierarchy and check the posterior
//! recovers the true abundance.

use vestige::inference::{run_mcmc, McmcSettings};
use vestige::model::{Family, ModelConfig, PriorSpec};
use vestige::rng::stream_rng;
use vestige::survey::simulate_tp_data;

fn main() -> vestige::Result<()> {
    let mut rng = stream_rng(17, 0);
    let nu = [0.01; 10];
    let sim = simulate_tp_data(10.0, 5.0, 20.0, &nu, 3, Family::Poisson, None, &mut rng)?;
    println!("truth: {} groups, {} animals; {} vestiges counted", sim.groups, sim.total, sim.data.total_count());

    let config = ModelConfig::poisson(
        PriorSpec::gamma(0.01, 0.01),
        PriorSpec::gamma(0.01, 0.01),
        PriorSpec::fixed(20.0),
    );
    let fit = run_mcmc(&sim.data, &config, &McmcSettings::default().with_seed(18))?;
    let t = fit.total();
    println!("posterior T: mean {:.1}, 95% CrI ({:.0}, {:.0})", t.mean, t.q2_5, t.q97_5);
    Ok(())
}
