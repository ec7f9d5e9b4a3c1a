//! Seeded randomness. Every randomized procedure takes one of these, so a
//! fixed seed reproduces results bit-for-bit.

use rand_core::Rng;
use rand_pcg::Pcg32;

use crate::ffield::{Fe, Field};

pub const DEFAULT_SEED: u64 = 0xB10C;

/// 64-bit linear-state generator (PCG32).
#[derive(Clone, Debug)]
pub struct SeededRng(Pcg32);

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        SeededRng(Pcg32::new(seed, 0x0a02_bdbf_7bb3_c0a7))
    }

    /// Independent stream for a named operation, so that concurrent calls
    /// do not share state yet stay deterministic.
    pub fn for_tag(seed: u64, tag: &str) -> Self {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in tag.bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x100_0000_01b3);
        }
        SeededRng(Pcg32::new(seed ^ h, h | 1))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform in `0..n`; `n` must be positive.
    pub fn below(&mut self, n: usize) -> usize {
        assert!(n > 0);
        (self.next_u64() % n as u64) as usize
    }

    pub fn element(&mut self, field: &Field) -> Fe {
        (self.next_u64() % field.order() as u64) as Fe
    }

    pub fn nonzero_element(&mut self, field: &Field) -> Fe {
        1 + (self.next_u64() % (field.order() as u64 - 1).max(1)) as Fe
    }
}

impl Default for SeededRng {
    fn default() -> Self {
        SeededRng::new(DEFAULT_SEED)
    }
}
