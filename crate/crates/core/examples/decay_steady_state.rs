//! Vestige stock under daily production and exponential decay converges to
//! the steady-state per-animal rate α.

use vestige::model::{accumulate_vestiges, steady_state_alpha, DecayParams};
use vestige::rng::stream_rng;

fn main() -> vestige::Result<()> {
    let decay = DecayParams::new(15.0, 0.5)?;
    let alpha = steady_state_alpha(&decay)?;
    let animals = 20;
    println!("steady state: α = {alpha:.3} vestiges per animal, {:.1} for {animals} animals", alpha * animals as f64);
    let path = accumulate_vestiges(&decay, animals, 25, &mut stream_rng(1, 0))?;
    for (day, v) in path.iter().enumerate().step_by(3) {
        println!("day {:>2}: {v:>4} (mean {:.1})", day + 1, decay.mean_per_individual(day as u64 + 1) * animals as f64);
    }
    Ok(())
}
