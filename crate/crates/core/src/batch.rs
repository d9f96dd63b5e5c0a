//! Data-parallel evaluation of independent jobs.
//!
//! With the `parallel` feature (default) work is spread over the rayon pool;
//! without it everything runs on the calling thread. Output order always
//! follows input order, so results are identical in both modes.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// Parallel if compiled in, sequential otherwise.
    pub fn best() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

pub fn map<T, U, F>(items: &[T], exec: Execution, f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}

/// Runs `f(i, rng_i)` for `i in 0..count`, each with its own generator
/// derived from `(seed, i)`. Results do not depend on the execution mode.
pub fn map_seeded<U, F>(count: usize, seed: u64, exec: Execution, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize, &mut ChaCha8Rng) -> U + Sync + Send,
{
    let idx: Vec<usize> = (0..count).collect();
    map(&idx, exec, |&i| {
        let mut rng = rng_for(seed, i as u64);
        f(i, &mut rng)
    })
}

/// Independent stream for job `index` under `seed`.
pub fn rng_for(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}
