//! Thin switch between rayon and plain iterators.
//!
//! Callers only ever map an index range to a `Vec` and reduce it themselves in
//! index order, which keeps results independent of scheduling.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[cfg(feature = "parallel")]
pub(crate) fn map_range<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_range<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).map(f).collect()
}

/// Sum in index order.
pub(crate) fn ordered_sum(values: &[f64]) -> f64 {
    values.iter().sum()
}
