//! All randomness flows from one seeded ChaCha20 generator. Independent tasks
//! draw from distinct ChaCha streams of the same key, so a trial's stream
//! depends only on `(seed, stream id)` and never on scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

pub type Rng = ChaCha20Rng;

pub fn seeded(seed: u64) -> Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// Stream `stream` of the generator keyed by `seed`.
pub fn stream(seed: u64, stream: u64) -> Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Derive a child generator from a parent, for sub-tasks that need their own stream.
pub fn fork(parent: &mut Rng) -> Rng {
    use rand::RngCore;
    let seed = parent.next_u64();
    let s = parent.next_u64();
    stream(seed, s)
}
