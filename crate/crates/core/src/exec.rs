//! Chunked sweeps over ranges of coalition bit patterns.

use std::ops::Range;

/// How a coalition sweep is scheduled.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Runs on the rayon pool; identical to `Sequential` without the `parallel` feature.
    #[default]
    Parallel,
}

const CHUNK: u64 = 1 << 14;

/// Splits `0..total` into chunks, folds each chunk with `map`, and combines the
/// chunk results with `reduce`. `reduce` must be associative; chunk results are
/// combined in an unspecified order when running in parallel.
pub(crate) fn map_reduce<T, M, R>(total: u64, exec: Execution, identity: impl Fn() -> T + Sync + Send, map: M, reduce: R) -> T
where
    T: Send,
    M: Fn(Range<u64>) -> T + Sync + Send,
    R: Fn(T, T) -> T + Sync + Send,
{
    let chunks = total.div_ceil(CHUNK);
    let range = move |c: u64| c * CHUNK..((c + 1) * CHUNK).min(total);
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..chunks)
                .into_par_iter()
                .map(|c| map(range(c)))
                .reduce(&identity, &reduce)
        }
        _ => (0..chunks).map(|c| map(range(c))).fold(identity(), &reduce),
    }
}

/// Runs `f` over the items, in parallel when asked and available.
pub(crate) fn map_items<I, T, F>(items: &[I], exec: Execution, f: F) -> Vec<T>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> T + Sync + Send,
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

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sequential_and_parallel_agree() {
        let total = 100_003;
        let run = |exec| map_reduce(total, exec, || 0u64, |r| r.sum::<u64>(), |a, b| a + b);
        let expected = total * (total - 1) / 2;
        assert_eq!(run(Execution::Sequential), expected);
        assert_eq!(run(Execution::Parallel), expected);
        assert_eq!(map_reduce(0, Execution::Parallel, || 7u64, |_| 1, |a, b| a + b), 7);
    }
}
