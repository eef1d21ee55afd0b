//! Seeding and the few discrete draws `rand_distr` does not cover directly.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

use crate::model::prior::sample_gamma;

pub type SimRng = ChaCha8Rng;

/// SplitMix64 finalizer; mixes a parent seed with a stream index so sibling
/// streams are decorrelated.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn stream_rng(seed: u64, stream: u64) -> SimRng {
    SimRng::seed_from_u64(derive_seed(seed, stream))
}

/// Poisson draw that accepts a zero mean.
pub fn poisson_draw<R: Rng + ?Sized>(mu: f64, rng: &mut R) -> u64 {
    if mu <= 0.0 {
        return 0;
    }
    let d = Poisson::new(mu).expect("finite positive mean");
    d.sample(rng) as u64
}

/// Negative binomial draw (mean `mu`, variance `mu + mu²/phi`) as a
/// Poisson–Gamma mixture.
pub fn negbin_draw<R: Rng + ?Sized>(mu: f64, phi: f64, rng: &mut R) -> u64 {
    if mu <= 0.0 {
        return 0;
    }
    let rate = sample_gamma(phi, phi / mu, rng);
    poisson_draw(rate, rng)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_seeds_differ() {
        let a: Vec<u64> = (0..8).map(|i| derive_seed(42, i)).collect();
        let mut b = a.clone();
        b.sort_unstable();
        b.dedup();
        assert_eq!(b.len(), 8);
        assert_ne!(derive_seed(1, 0), derive_seed(2, 0));
    }

    #[test]
    fn negbin_moments() {
        let mut rng = stream_rng(5, 0);
        let n = 200_000;
        let (mu, phi) = (6.0, 0.5);
        let xs: Vec<f64> = (0..n).map(|_| negbin_draw(mu, phi, &mut rng) as f64).collect();
        let m = xs.iter().sum::<f64>() / n as f64;
        let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1) as f64;
        assert!((m - mu).abs() / mu < 0.02, "{m}");
        let target = mu + mu * mu / phi;
        assert!((v - target).abs() / target < 0.05, "{v} vs {target}");
    }
}
