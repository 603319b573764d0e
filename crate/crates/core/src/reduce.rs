//! Deterministic summation.
//!
//! Every weighted sum in the crate goes through [`tree_sum`]: the input is cut
//! into fixed chunks of [`CHUNK`] terms, each chunk is summed left to right,
//! and the chunk partials are combined by a balanced pairwise tree. The shape
//! of the tree depends only on the number of terms, so results are bit-stable
//! regardless of how many rayon workers evaluate the chunks.

use std::ops::Add;

use num_complex::Complex64;
use rayon::prelude::*;

/// Number of terms summed sequentially at the leaves of the reduction tree.
pub const CHUNK: usize = 1024;

/// Values that can be accumulated by [`tree_sum`].
pub trait Summand: Copy + Add<Output = Self> + Send + Sync {
    fn zero() -> Self;
}

impl Summand for f64 {
    fn zero() -> Self {
        0.0
    }
}

impl Summand for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
}

/// Sums `term(0) + ... + term(len - 1)` with the fixed chunk/tree layout.
pub fn tree_sum<T, F>(len: usize, term: F) -> T
where
    T: Summand,
    F: Fn(usize) -> T + Sync + Send,
{
    if len == 0 {
        return T::zero();
    }
    let chunks = len.div_ceil(CHUNK);
    let partials: Vec<T> = if chunks == 1 {
        vec![chunk_sum(0, len, &term)]
    } else {
        (0..chunks)
            .into_par_iter()
            .map(|c| chunk_sum(c * CHUNK, ((c + 1) * CHUNK).min(len), &term))
            .collect()
    };
    pairwise(&partials)
}

/// Sums a slice with the same layout as [`tree_sum`].
pub fn sum_slice<T>(values: &[T]) -> T
where
    T: Summand,
{
    tree_sum(values.len(), |i| values[i])
}

fn chunk_sum<T, F>(start: usize, end: usize, term: &F) -> T
where
    T: Summand,
    F: Fn(usize) -> T,
{
    let mut acc = T::zero();
    for i in start..end {
        acc = acc + term(i);
    }
    acc
}

fn pairwise<T>(values: &[T]) -> T
where
    T: Summand,
{
    match values.len() {
        0 => T::zero(),
        1 => values[0],
        len => {
            let mid = len / 2;
            pairwise(&values[..mid]) + pairwise(&values[mid..])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_and_small() {
        assert_eq!(tree_sum(0, |_| 1.0f64), 0.0);
        assert_eq!(tree_sum(3, |i| i as f64), 3.0);
    }

    #[test]
    fn independent_of_worker_count() {
        let len = 10 * CHUNK + 17;
        let term = |i: usize| ((i as f64) * 0.37).sin() * 1e-3 + 1.0 / (1.0 + i as f64);
        let run = |threads: usize| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| tree_sum(len, term))
        };
        let a = run(1);
        for threads in [2, 3, 8] {
            assert_eq!(a.to_bits(), run(threads).to_bits());
        }
    }

    #[test]
    fn matches_exact_integer_sum() {
        let len = 5 * CHUNK + 3;
        let s = tree_sum(len, |i| i as f64);
        assert_eq!(s, (len * (len - 1) / 2) as f64);
    }
}
