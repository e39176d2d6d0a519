//! Thin switch between rayon and sequential iteration. Callers only use
//! order-preserving operations, so results do not depend on the worker count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

pub(crate) fn map<T: Sync, U: Send>(items: &[T], f: impl Fn(&T) -> U + Sync + Send) -> Vec<U> {
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Runs `task(i, counts)` for `i in 0..tasks`, each adding into a zeroed
/// vector of length `len`, and returns the elementwise sum. Integer sums are
/// exact, so the merge order does not matter.
pub(crate) fn sum_counts(tasks: usize, len: usize, task: impl Fn(usize, &mut [u64]) + Sync + Send) -> Vec<u64> {
    #[cfg(feature = "parallel")]
    {
        (0..tasks)
            .into_par_iter()
            .fold(
                || vec![0u64; len],
                |mut acc, i| {
                    task(i, &mut acc);
                    acc
                },
            )
            .reduce(
                || vec![0u64; len],
                |mut a, b| {
                    for (x, y) in a.iter_mut().zip(b) {
                        *x += y;
                    }
                    a
                },
            )
    }
    #[cfg(not(feature = "parallel"))]
    {
        let mut acc = vec![0u64; len];
        for i in 0..tasks {
            task(i, &mut acc);
        }
        acc
    }
}
