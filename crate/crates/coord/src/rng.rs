//! Deterministic random streams.
//!
//! Every stochastic component draws from [`rng_stream`], keyed by a user
//! seed and a stream id. Distinct stream ids produce statistically
//! independent sequences, so Monte-Carlo trials can run concurrently and
//! still be bit-reproducible regardless of scheduling.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The stream type handed to workers. Value-typed: each worker owns its own.
pub type RngStream = ChaCha8Rng;

/// A deterministic random stream for `(seed, stream_id)`.
pub fn rng_stream(seed: u64, stream_id: u64) -> RngStream {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream_id);
    rng
}
