//! Seed splitting.
//!
//! Every random draw in the crate comes from a ChaCha8 generator keyed by a
//! master seed and a stream id: `stream_rng(seed, id)`. Distinct consumers
//! (per coordinate, per grid point, per trial) use distinct stream ids, so
//! results never depend on evaluation order or thread scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
