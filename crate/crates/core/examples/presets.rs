//! Built-in case-study presets, transect coverage from geometry, and the
//! territory-packing prior for the number of groups.

use vestige::io::{builtin_presets, coverage_from_geometry, territory_prior, DEFAULT_MEAN_FRACTION};

fn main() -> vestige::Result<()> {
    for p in builtin_presets() {
        let data = if p.has_embedded_data() { "embedded data" } else { "needs dataset CSV" };
        println!("{:<8} {:?} λ_G {:?} α {:?} ({data})", p.name, p.model.family, p.model.lambda_g, p.model.alpha);
    }
    println!();
    for len in [8_000.0, 12_000.0] {
        println!("peccary transect {len} m: ν = {:.6}", coverage_from_geometry(len, 2.0, 43.65)?);
    }
    for (what, area, lo, hi) in [("kit fox", 879.0, 2.5, 11.0), ("red fox", 2448.0, 5.0, 12.0), ("sika A", 13.9, 0.02, 0.12)] {
        let t = territory_prior(area, lo, hi, DEFAULT_MEAN_FRACTION)?;
        println!("{what}: up to {} groups; {}", t.max_groups, t.note);
    }
    Ok(())
}
