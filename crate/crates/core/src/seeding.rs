//! Deterministic sub-seed derivation.
//!
//! Every stochastic stage takes a master seed and derives per-task streams
//! from it, so parallel and serial schedules produce identical output.

use rand_chacha::ChaCha8Rng;

/// splitmix64 finalizer; decorrelates nearby seeds.
fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Derive a child seed for an indexed sub-task (tree index, class index,
/// fold index, ...).
pub fn child_seed(master: u64, stream: u64) -> u64 {
    splitmix64(master ^ stream.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

/// Two-level derivation, e.g. (fold, base) pairs.
pub fn child_seed2(master: u64, a: u64, b: u64) -> u64 {
    child_seed(child_seed(master, a), b)
}

/// Seeded RNG for one sub-task.
pub fn task_rng(master: u64, stream: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(child_seed(master, stream))
}
