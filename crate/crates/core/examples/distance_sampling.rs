//! Simulate a line-transect survey and estimate abundance with a
//! half-normal detection function, under correct and wrong decay rates.

use vestige::rng::stream_rng;
use vestige::survey::{ds_abundance, effective_strip_half_width, half_normal_mle, simulate_survey, SurveyDesign};

fn main() -> vestige::Result<()> {
    let design = SurveyDesign::default();
    let sim = simulate_survey(&design, &mut stream_rng(3, 0))?;
    let d = &sim.distances;
    println!("{} of {} vestiges detected on {} transects", d.n_detected(), design.n_vestiges, d.counts().len());

    let fit = half_normal_mle(&d.pooled(), d.truncation_m)?;
    println!(
        "σ̂ = {:.2} m (true {}), esw {:.2} m",
        fit.sigma,
        design.detection_sigma_m,
        effective_strip_half_width(fit.sigma, d.truncation_m)
    );

    let truth = design.n_vestiges as f64 / (10.0 * 15.0);
    for (lambda, delta) in [(15.0, 10.0), (16.0, 11.0), (19.0, 14.0)] {
        let est = ds_abundance(d, design.area_km2(), delta, lambda)?;
        println!(
            "λ {lambda:>4}, δ {delta:>4}: N̂ {:6.2} (truth {truth:.2}), CI ({:.1}, {:.1}), CV {:.3}",
            est.abundance, est.ci_lower, est.ci_upper, est.cv
        );
    }
    Ok(())
}
