//! Counter-based hashing used for every random draw in the crate.
//!
//! A draw is a pure function of `(seed, counter words)`, so results do not
//! depend on evaluation order or on how far a window has been extended.

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

/// The splitmix64 finalizer.
#[inline]
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Mixes a seed with a sequence of counter words.
#[inline]
pub fn mix(seed: u64, words: &[u64]) -> u64 {
    let mut h = splitmix64(seed);
    for (i, &w) in words.iter().enumerate() {
        h = splitmix64(h ^ w.wrapping_mul(GOLDEN).rotate_left(17 * i as u32 + 7));
    }
    h
}

/// Maps a 64-bit hash to a uniform value in `[0, 1)` using its top 53 bits.
#[inline]
pub fn unit_interval(h: u64) -> f64 {
    (h >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Seed for the `index`-th independent replicate derived from `base`.
#[inline]
pub fn derive_seed(base: u64, index: u64) -> u64 {
    mix(base, &[0x5eed, index])
}

/// Small sequential generator on top of [`splitmix64`], for sampling plans
/// and test inputs where a stream is more convenient than a counter.
#[derive(Debug, Clone)]
pub struct SplitMix {
    state: u64,
}

impl SplitMix {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        splitmix64(self.state)
    }

    /// Uniform in `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        unit_interval(self.next_u64())
    }

    /// Uniform in `[lo, hi)`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mix_is_order_sensitive_and_deterministic() {
        assert_eq!(mix(7, &[1, 2, 3]), mix(7, &[1, 2, 3]));
        assert_ne!(mix(7, &[1, 2, 3]), mix(7, &[2, 1, 3]));
        assert_ne!(mix(7, &[1, 2, 3]), mix(8, &[1, 2, 3]));
    }

    #[test]
    fn unit_interval_mean_is_half() {
        let n = 200_000u64;
        let mean = (0..n).map(|i| unit_interval(mix(3, &[i]))).sum::<f64>() / n as f64;
        // standard error of the mean is 1/sqrt(12 n) ≈ 6.5e-4
        assert!((mean - 0.5).abs() < 4e-3, "{mean}");
    }
}
