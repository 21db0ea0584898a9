//! Seeded randomness for corpus generation and random Staller play.
//!
//! Every random draw in the crate goes through [`SeedRng`]: a ChaCha8 stream
//! whose 32-byte key is the little-endian seed followed by 24 zero bytes
//! (stream 0, counter 0). Derived quantities use fixed mappings so the
//! streams can be reproduced outside Rust:
//!
//! - `next_u64()`: two consecutive 32-bit output words, low word first
//! - `below(k)`:   `(next_u64() as u128 * k as u128) >> 64`
//! - `unit()`:     `(next_u64() >> 11) as f64 * 2^-53`

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct SeedRng(ChaCha8Rng);

impl SeedRng {
    pub fn new(seed: u64) -> Self {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&seed.to_le_bytes());
        SeedRng(ChaCha8Rng::from_seed(key))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform integer in `0..k`. `k` must be positive.
    pub fn below(&mut self, k: usize) -> usize {
        assert!(k > 0, "below(0)");
        ((self.next_u64() as u128 * k as u128) >> 64) as usize
    }

    /// Uniform float in `[0, 1)`.
    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

/// Mixes a family seed with an index into an independent stream seed.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut r = SeedRng::new(seed ^ index.wrapping_mul(0x9e37_79b9_7f4a_7c15));
    r.next_u64()
}
