//! Counter-based random streams.
//!
//! A stream is identified by a 64-bit key. Draw `i` (counting from 1) of a
//! stream with key `k` is
//!
//! ```text
//! mix64(k + i·0x9E3779B97F4A7C15)        (wrapping arithmetic)
//! ```
//!
//! where `mix64` is the SplitMix64 finalizer (shift/xor/multiply with
//! constants `0xBF58476D1CE4E5B9` and `0x94D049BB133111EB`). This is exactly
//! the SplitMix64 sequence seeded with `k`. Keys for sub-streams are derived
//! with [`Seed::derive`], so every cell of a parallel scan owns an
//! independent stream that does not depend on scheduling.
//!
//! Uniform reals are `((u >> 12) + 0.5) · 2⁻⁵²`, which lies strictly inside
//! `(0, 1)`; the largest value is `1 − 2⁻⁵³`. Comparisons `u < p` therefore
//! never succeed for `p = 0` and always succeed for `p = 1`.

use serde::{Deserialize, Serialize};

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
const DERIVE_SALT: u64 = 0xD1B5_4A32_D192_ED03;

#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Master seed for a run or a scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Seed(pub u64);

impl Seed {
    /// Child seed for the stream addressed by `path`, e.g. `[row, col]`.
    ///
    /// `h₀ = mix64(seed ^ SALT)`, `hⱼ₊₁ = mix64(hⱼ ^ mix64(pathⱼ + γ))`.
    pub fn derive(self, path: &[u64]) -> Seed {
        let mut h = mix64(self.0 ^ DERIVE_SALT);
        for &index in path {
            h = mix64(h ^ mix64(index.wrapping_add(GOLDEN_GAMMA)));
        }
        Seed(h)
    }

    pub fn stream(self) -> Stream {
        Stream::new(self)
    }
}

impl From<u64> for Seed {
    fn from(value: u64) -> Self {
        Seed(value)
    }
}

#[derive(Debug, Clone)]
pub struct Stream {
    key: u64,
    counter: u64,
}

impl Stream {
    pub fn new(seed: Seed) -> Self {
        Stream {
            key: seed.0,
            counter: 0,
        }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.counter = self.counter.wrapping_add(1);
        mix64(
            self.key
                .wrapping_add(self.counter.wrapping_mul(GOLDEN_GAMMA)),
        )
    }

    /// Uniform draw on the open interval `(0, 1)`.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        const SCALE: f64 = 1.0 / (1u64 << 52) as f64;
        ((self.next_u64() >> 12) as f64 + 0.5) * SCALE
    }

    /// Number of draws consumed so far.
    pub fn position(&self) -> u64 {
        self.counter
    }
}
