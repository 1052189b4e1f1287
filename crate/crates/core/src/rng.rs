//! Seeded, streamable random number generation.
//!
//! Every stochastic routine derives its generator from a 64-bit master seed
//! plus a stream index. Stream k produces the same values whether one chain
//! runs or a thousand, which is what makes multi-chain runs reproducible.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator for one chain: `seed` selects the experiment, `stream` the chain.
pub fn chain_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform draw from [-1, 1), the comparison noise of the stochastic unit.
pub fn uniform_pm1<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.random::<f64>() * 2.0 - 1.0
}
