//! Deterministic seed derivation.
//!
//! Every random draw in the crate comes from a ChaCha8 stream addressed by a
//! `(seed, stream)` pair. Samplers give each row of the adjacency matrix its
//! own stream, and studies derive one seed per replication, so results do not
//! depend on the order or the thread in which work is executed.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Streams below this value address dyad rows; triangle streams live above it.
pub(crate) const TRIANGLE_STREAM_BASE: u64 = 1 << 48;

const DERIVE_STREAM: u64 = u64::MAX;

/// Derive a child seed from `master` for the pair of tags `(a, b)`.
///
/// Distinct tags give statistically independent seeds; equal arguments always
/// give the same seed.
pub fn derive_seed(master: u64, a: u64, b: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master ^ a.rotate_left(32));
    rng.set_stream(DERIVE_STREAM - a);
    rng.set_word_pos(u128::from(b) * 2);
    rng.next_u64()
}

/// Seed used by replication `rep` of a study run at population size `n`.
pub fn replication_seed(master: u64, n: usize, rep: usize) -> u64 {
    derive_seed(master, n as u64, rep as u64)
}

pub(crate) fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
