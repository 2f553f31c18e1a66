//! Task execution and seeding.
//!
//! Chains, replicates and folds are independent tasks. The library only asks
//! an [`Executor`] to evaluate `f(0), f(1), …, f(n-1)` and return the results
//! in index order; each task derives its own random stream from a seed, so
//! the output is identical whether the tasks run on one thread or many.

use alloc::vec::Vec;
use rand::SeedableRng;

/// Random stream used throughout the crate (portable, reproducible).
pub type SimRng = rand_chacha::ChaCha8Rng;

pub trait Executor: Sync {
    fn map<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send;
}

/// Runs every task on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl Executor for Sequential {
    fn map<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        (0..n).map(f).collect()
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for sub-task `index` of a task seeded with `seed`.
///
/// Plain `seed + index` would make task (s, i+1) and task (s+1, i) share a
/// stream once seeds are nested (replicate → chain); hashing keeps them apart.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    splitmix64(seed ^ splitmix64(index.wrapping_add(0x5DEE_CE66_D1CE_4E5B)))
}

pub fn rng_from_seed(seed: u64) -> SimRng {
    SimRng::seed_from_u64(seed)
}
