//! Seeded randomness: a deterministic generator with splittable per-trial
//! streams and the standard Laplace draw used by every mechanism.
//!
//! Mechanisms only ever consume standard Laplace variables (density
//! (1/2)e^{-|u|}); each mechanism multiplies by its own scale factor, so no
//! rate-vs-scale confusion can arise. Sampling is inverse-CDF on a uniform
//! draw from the open interval, which keeps the draw sequence reproducible
//! and loop-free.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Mix a base seed with a stream index into an independent 64-bit seed
/// (SplitMix64 finalizer). Identical (base, stream) pairs always yield the
/// same stream; distinct pairs yield statistically independent streams.
pub fn derive_seed(base_seed: u64, stream: u64) -> u64 {
    let mut z = base_seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministic noise generator. Single-owner: concurrent trials each derive
/// their own source via [`NoiseSource::derived`] instead of sharing one.
#[derive(Debug, Clone)]
pub struct NoiseSource {
    rng: ChaCha8Rng,
    seed: u64,
}

impl NoiseSource {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            seed,
        }
    }

    /// Independent stream for (base seed, stream index), e.g. one per trial.
    pub fn derived(base_seed: u64, stream: u64) -> Self {
        Self::new(derive_seed(base_seed, stream))
    }

    /// The concrete seed this source was created from.
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Uniform draw from the open interval (0, 1).
    pub fn uniform_open01(&mut self) -> f64 {
        // 53 random mantissa bits, shifted into (0, 1) by half a ulp.
        let bits = self.rng.next_u64() >> 11;
        (bits as f64 + 0.5) / (1u64 << 53) as f64
    }

    /// Standard Laplace draw: density (1/2)e^{-|u|}, so P(|Z| > t) = e^{-t}.
    pub fn standard_laplace(&mut self) -> f64 {
        let v = self.uniform_open01() - 0.5;
        -v.signum() * (1.0 - 2.0 * v.abs()).ln()
    }
}

impl RngCore for NoiseSource {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.rng.fill_bytes(dest)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_sequence() {
        let mut a = NoiseSource::new(42);
        let mut b = NoiseSource::new(42);
        for _ in 0..1000 {
            assert_eq!(a.standard_laplace(), b.standard_laplace());
        }
    }

    #[test]
    fn derived_streams_differ() {
        let mut a = NoiseSource::derived(42, 0);
        let mut b = NoiseSource::derived(42, 1);
        let da: Vec<f64> = (0..8).map(|_| a.standard_laplace()).collect();
        let db: Vec<f64> = (0..8).map(|_| b.standard_laplace()).collect();
        assert_ne!(da, db);
    }

    #[test]
    fn laplace_mean_near_zero() {
        let mut rng = NoiseSource::new(7);
        let n = 1_000_000;
        let mean: f64 = (0..n).map(|_| rng.standard_laplace()).sum::<f64>() / n as f64;
        assert!(mean.abs() < 0.01, "mean over 1e6 draws was {mean}");
    }

    #[test]
    fn laplace_median_tail_is_half() {
        // P(|Z| > ln 2) = e^{-ln 2} = 1/2 exactly.
        let mut rng = NoiseSource::new(11);
        let n = 1_000_000;
        let t = 2.0_f64.ln();
        let hits = (0..n)
            .filter(|_| rng.standard_laplace().abs() > t)
            .count();
        let freq = hits as f64 / n as f64;
        assert!((freq - 0.5).abs() < 0.005, "tail frequency {freq}");
    }

    #[test]
    fn laplace_tail_exceedance_within_four_sigma() {
        let mut rng = NoiseSource::new(13);
        let n = 1_000_000usize;
        let draws: Vec<f64> = (0..n).map(|_| rng.standard_laplace().abs()).collect();
        for t in [0.5, 1.0, 2.0] {
            let p = (-t).exp();
            let freq = draws.iter().filter(|&&z| z > t).count() as f64 / n as f64;
            let sigma = (p * (1.0 - p) / n as f64).sqrt();
            assert!(
                (freq - p).abs() <= 4.0 * sigma,
                "t={t}: freq {freq} vs e^-t {p} (4 sigma = {})",
                4.0 * sigma
            );
        }
    }

    #[test]
    fn uniform_open01_stays_open() {
        let mut rng = NoiseSource::new(3);
        for _ in 0..100_000 {
            let u = rng.uniform_open01();
            assert!(u > 0.0 && u < 1.0);
        }
    }
}
