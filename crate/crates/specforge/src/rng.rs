//! SplitMix64: the deterministic stream generator behind every seeded
//! sweep and model construction.
//!
//! The generator is the standard SplitMix64 of Steele, Lea and Flood: the
//! state advances by the 64-bit golden-gamma constant and the output is a
//! fixed bit-mix of the new state, so the n-th output is a pure function of
//! (seed, n) and any language can reproduce the stream:
//!
//! ```text
//! state  = seed + (n+1) * 0x9E3779B97F4A7C15
//! z = state
//! z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//! z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//! output = z ^ (z >> 31)
//! ```
//!
//! Floats take the top 53 bits: u64 >> 11, scaled by 2^-53.

use num_complex::Complex64;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1) with 53-bit resolution.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Complex with both parts uniform in [lo, hi); real part drawn first.
    pub fn complex_uniform(&mut self, lo: f64, hi: f64) -> Complex64 {
        let re = self.uniform(lo, hi);
        let im = self.uniform(lo, hi);
        Complex64::new(re, im)
    }

    /// Derives an independent child stream; used to give each model in a
    /// sweep its own seed.
    pub fn child_seed(&mut self) -> u64 {
        self.next_u64()
    }
}
