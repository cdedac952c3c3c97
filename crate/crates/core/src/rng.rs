//! Seeded, splittable random streams.
//!
//! Every replica (chain or sample block) draws from ChaCha8 keyed by the
//! 64-bit seed and positioned on its own 64-bit stream, so replicas are
//! independent by construction and a (seed, stream) pair always yields the
//! same sequence.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngSeed {
    pub seed: u64,
    pub stream: u32,
}

impl RngSeed {
    pub fn new(seed: u64, stream: u32) -> Self {
        Self { seed, stream }
    }

    /// Same seed, different stream.
    pub fn with_stream(self, stream: u32) -> Self {
        Self { stream, ..self }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(u64::from(self.stream));
        rng
    }
}

/// Stream ranges reserved per role, so experiments that draw from several
/// samplers never share a stream.
pub mod streams {
    pub const GAUSSIAN: u32 = 0;
    pub const LIMIT: u32 = 1 << 20;
    pub const MCMC: u32 = 2 << 20;
    pub const AUXILIARY: u32 = 3 << 20;
}
