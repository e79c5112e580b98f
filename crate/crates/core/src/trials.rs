//! Batch execution of independent trials.
//!
//! With the `parallel` feature (on by default) batches run on the rayon
//! thread pool; without it, or with [`Execution::Sequential`], they run in
//! order on the calling thread. Each trial owns a sampler derived from the
//! seed and its index, so results are identical either way.

use crate::random::Sampler;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

/// Maps `f` over `items`, preserving order.
pub fn map_indexed<I, T, F>(exec: Execution, items: I, f: F) -> Vec<T>
where
    I: IntoIterator<Item = usize>,
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    let items: Vec<usize> = items.into_iter().collect();
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            items.into_par_iter().map(f).collect()
        }
        _ => items.into_iter().map(f).collect(),
    }
}

/// Runs `count` trials; trial `i` receives `Sampler::for_trial(seed, i)`.
pub fn run_trials<T, F>(exec: Execution, seed: u64, count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut Sampler, usize) -> T + Sync + Send,
{
    map_indexed(exec, 0..count, |i| f(&mut Sampler::for_trial(seed, i as u64), i))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sequential_and_parallel_agree() {
        let run = |exec| run_trials(exec, 42, 16, |s, i| (i, s.small_rational()));
        assert_eq!(run(Execution::Sequential), run(Execution::Parallel));
    }
}
