//! Per-PE random streams.
//!
//! A 64-bit LCG seeded as `seed + (pe + 1) * GOLDEN_GAMMA`. Every draw
//! advances the state once and then reads the new state.

pub const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
pub const LCG_MULTIPLIER: u64 = 6_364_136_223_846_793_005;
pub const LCG_INCREMENT: u64 = 1_442_695_040_888_963_407;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeRng {
    state: u64,
}

impl PeRng {
    pub fn new(seed: u64, pe: usize) -> Self {
        PeRng {
            state: seed.wrapping_add((pe as u64 + 1).wrapping_mul(GOLDEN_GAMMA)),
        }
    }

    pub fn state(&self) -> u64 {
        self.state
    }

    fn step(&mut self) -> u64 {
        self.state = self
            .state
            .wrapping_mul(LCG_MULTIPLIER)
            .wrapping_add(LCG_INCREMENT);
        self.state
    }

    /// `WHATEVR`: uniform in `[0, 2^31)`.
    pub fn next_int(&mut self) -> i64 {
        (self.step() >> 33) as i64
    }

    /// `WHATEVAR`: uniform in `[0, 1)` with 53 bits of resolution.
    pub fn next_float(&mut self) -> f64 {
        (self.step() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}
