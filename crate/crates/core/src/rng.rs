//! Portable pseudo-random stream used for every seeded draw in the crate.
//!
//! The generator is xoshiro256** seeded through SplitMix64 (the reference
//! seeding procedure published with xoshiro). Derived draws are defined
//! here so that another implementation can reproduce them bit for bit:
//!
//! * `below(n)`: rejection sampling on the raw 64-bit output. Values at or
//!   above `u64::MAX - (u64::MAX % n)` are discarded, the rest reduced
//!   modulo `n`.
//! * `unit()`: the top 53 bits of one output, scaled by 2^-53, giving a
//!   value in `[0, 1)`.

use rand_core::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;

#[derive(Debug, Clone)]
pub struct Stream {
    inner: Xoshiro256StarStar,
}

impl Stream {
    pub fn new(seed: u64) -> Self {
        Self {
            inner: Xoshiro256StarStar::seed_from_u64(seed),
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform index in `0..n`. `n` must be nonzero.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "empty range");
        let zone = u64::MAX - (u64::MAX % n);
        loop {
            let v = self.next_u64();
            if v < zone {
                return v % n;
            }
        }
    }

    /// Uniform float in `[0, 1)`.
    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform float in `[lo, hi)`.
    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }
}
