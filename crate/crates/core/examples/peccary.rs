//! The collared peccary case study from its built-in preset: Poisson and
//! negative binomial fits compared by DIC.

use vestige::inference::{run_mcmc, McmcSettings};
use vestige::io::find_preset;
use vestige::model::Family;

fn main() -> vestige::Result<()> {
    let preset = find_preset("peccary")?;
    for note in &preset.provenance {
        println!("- {note}");
    }
    let data = preset.dataset(None)?;
    let settings = McmcSettings::default().with_seed(2012);
    for family in [Family::Poisson, Family::NegativeBinomial] {
        let fit = run_mcmc(&data, &preset.model_config(Some(family))?, &settings)?;
        let t = fit.total();
        println!(
            "{:<8} T mean {:6.1}  95% CrI ({:.0}, {:.0})  DIC {:.2}",
            family.label(),
            t.mean,
            t.q2_5,
            t.q97_5,
            fit.dic
        );
    }
    Ok(())
}
