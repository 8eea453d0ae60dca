//! Seeded randomness with a pinned generator and hand-written draw
//! algorithms.
//!
//! Sampling results are part of this crate's observable contract: golden
//! tests freeze selections, so a draw must never change across platforms,
//! library upgrades, or refactors. We therefore pin ChaCha8 (whose output
//! stream is specified by the ChaCha algorithm itself, not by the wrapping
//! library) and implement bounded draws and shuffling here instead of
//! borrowing helpers whose implementation details float between releases.

use rand_chacha::ChaCha8Rng;
use rand_core::{Rng, SeedableRng};

/// Deterministic random source used by sampling and shuffling.
///
/// Equal seeds yield equal draw sequences, forever.
#[derive(Debug, Clone)]
pub struct SeededRng {
    inner: ChaCha8Rng,
}

impl SeededRng {
    /// Creates a generator from a bare 64-bit seed.
    pub fn new(seed: u64) -> Self {
        Self {
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Creates the per-domain generator: the run seed XORed with the
    /// FNV-1a-64 hash of the domain id.
    ///
    /// Each domain gets an independent stream, so domains can be sampled
    /// concurrently (or in any order) without changing any selection.
    pub fn for_domain(seed: u64, domain_id: &str) -> Self {
        Self::new(seed ^ fnv1a_64(domain_id.as_bytes()))
    }

    /// Next raw 64-bit value from the ChaCha8 stream.
    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform draw from `0..bound` by masked rejection: take the low
    /// `ceil(log2(bound))` bits of each 64-bit output and retry until the
    /// value falls below `bound`. Rejection keeps the draw exactly uniform;
    /// masking keeps the expected retry count below one.
    ///
    /// # Panics
    /// Panics if `bound` is zero.
    pub fn bounded(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "bounded() requires a nonzero bound");
        if bound.is_power_of_two() {
            return self.next_u64() & (bound - 1);
        }
        let mask = (1u64 << (64 - bound.leading_zeros())) - 1;
        loop {
            let v = self.next_u64() & mask;
            if v < bound {
                return v;
            }
        }
    }

    /// In-place Fisher–Yates shuffle (swap positions from the back, each
    /// with a `bounded` draw).
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.bounded(i as u64 + 1) as usize;
            items.swap(i, j);
        }
    }
}

/// FNV-1a 64-bit hash; fixed constants, stable by definition.
pub fn fnv1a_64(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf2_9ce4_8422_2325u64;
    for &b in bytes {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}
