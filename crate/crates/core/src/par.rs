//! Thin dispatch layer for data-parallel inner loops. With the
//! `parallel` feature the work runs on rayon; without it, sequentially.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Filter a range of candidate indices by a predicate, preserving order.
#[cfg(feature = "parallel")]
pub fn filter_range<F>(n: u64, pred: F) -> Vec<u64>
where
    F: Fn(u64) -> bool + Sync + Send,
{
    (0..n).into_par_iter().filter(|&i| pred(i)).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn filter_range<F>(n: u64, pred: F) -> Vec<u64>
where
    F: Fn(u64) -> bool + Sync + Send,
{
    (0..n).filter(|&i| pred(i)).collect()
}

/// Sequential variant kept unconditionally, so the two paths can be
/// compared head to head in benches regardless of enabled features.
pub fn filter_range_seq<F>(n: u64, pred: F) -> Vec<u64>
where
    F: Fn(u64) -> bool,
{
    (0..n).filter(|&i| pred(i)).collect()
}

/// Map over a slice, collecting results in order.
#[cfg(feature = "parallel")]
pub fn map_slice<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_slice<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    items.iter().map(f).collect()
}
