//! Data-parallel loop helpers. With the `parallel` feature these bridge to
//! rayon; without it they fall back to plain sequential iterators. Every
//! reduction used here is a minimum under a strict total order, so results
//! do not depend on the parallel schedule.

use std::cmp::Ordering;

#[cfg(feature = "parallel")]
pub(crate) fn min_candidate<T, F, C>(count: u64, eval: F, cmp: C) -> Option<T>
where
    T: Send,
    F: Fn(u64) -> Option<T> + Sync + Send,
    C: Fn(&T, &T) -> Ordering + Sync + Send,
{
    use rayon::prelude::*;
    (0..count)
        .into_par_iter()
        .filter_map(|i| eval(i))
        .min_by(|a, b| cmp(a, b))
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn min_candidate<T, F, C>(count: u64, eval: F, cmp: C) -> Option<T>
where
    T: Send,
    F: Fn(u64) -> Option<T> + Sync + Send,
    C: Fn(&T, &T) -> Ordering + Sync + Send,
{
    (0..count).filter_map(eval).min_by(|a, b| cmp(a, b))
}

/// Order-preserving indexed map over `0..count`.
#[cfg(feature = "parallel")]
pub(crate) fn map_indexed<T, F>(count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..count).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_indexed<T, F>(count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..count).map(f).collect()
}
