//! Seed fan-out.
//!
//! Every random stream in the crate is a ChaCha8 stream keyed by a master
//! seed and selected by `(tag, index)`, so trial `t` of an experiment draws
//! the same randomness no matter which thread executes it.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

/// Stream tags. Distinct tags give independent streams under one master seed.
pub mod tags {
    pub const STRATEGY: u32 = 0;
    pub const INSTANCE: u32 = 1;
    pub const RUN_SEED: u32 = 2;
    pub const YES: u32 = 3;
    pub const NO: u32 = 4;
    pub const SIMULATOR: u32 = 5;
    pub const CODES: u32 = 6;
    pub const TRANSFER: u32 = 7;
    pub const GRAPHS: u32 = 8;
    pub const ROUNDS: u32 = 9;
    pub const COMM: u32 = 10;
    pub const ADDRESS: u32 = 11;
}

/// The stream `(master, tag, index)`.
pub fn stream(master: u64, tag: u32, index: u64) -> SimRng {
    assert!(index < 1 << 40, "stream index {index} too large");
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(((tag as u64) << 40) | index);
    rng
}

/// Derives a plain `u64` seed for `(master, tag, index)`.
pub fn derive(master: u64, tag: u32, index: u64) -> u64 {
    use rand::RngCore;
    stream(master, tag, index).next_u64()
}

/// The randomness a strategy sees when run with `seed`.
pub fn strategy_rng(seed: u64) -> SimRng {
    stream(seed, tags::STRATEGY, 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::RngCore;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a = stream(7, tags::YES, 3).next_u64();
        assert_eq!(a, stream(7, tags::YES, 3).next_u64());
        assert_ne!(a, stream(7, tags::NO, 3).next_u64());
        assert_ne!(a, stream(7, tags::YES, 4).next_u64());
        assert_ne!(a, stream(8, tags::YES, 3).next_u64());
    }
}
