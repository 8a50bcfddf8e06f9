//! Data-parallel helpers. With the `parallel` feature these run on the rayon
//! pool; without it they are plain sequential loops. Every helper returns
//! results in input order, so output never depends on scheduling.

use std::ops::Range;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Below this many items the sequential path is used even when parallelism
/// is enabled.
#[cfg(feature = "parallel")]
pub(crate) const MIN_PARALLEL_ITEMS: usize = 64;

#[cfg(feature = "parallel")]
pub(crate) fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    if items.len() < MIN_PARALLEL_ITEMS {
        return items.iter().map(f).collect();
    }
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(f).collect()
}

/// Ordered map that fails if any item fails. When several items fail, which
/// error is reported is unspecified.
#[cfg(feature = "parallel")]
pub(crate) fn try_map<T, R, E, F>(items: &[T], f: F) -> Result<Vec<R>, E>
where
    T: Sync,
    R: Send,
    E: Send,
    F: Fn(&T) -> Result<R, E> + Sync + Send,
{
    if items.len() < MIN_PARALLEL_ITEMS {
        return items.iter().map(f).collect();
    }
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn try_map<T, R, E, F>(items: &[T], f: F) -> Result<Vec<R>, E>
where
    F: Fn(&T) -> Result<R, E>,
{
    items.iter().map(f).collect()
}

/// The result for the smallest index in `range` for which `f` returns `Some`.
#[cfg(feature = "parallel")]
pub(crate) fn find_first<R, F>(range: Range<u64>, f: F) -> Option<R>
where
    R: Send,
    F: Fn(u64) -> Option<R> + Sync + Send,
{
    if range.end.saturating_sub(range.start) < MIN_PARALLEL_ITEMS as u64 {
        return range.into_iter().find_map(f);
    }
    range.into_par_iter().find_map_first(f)
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn find_first<R, F>(range: Range<u64>, f: F) -> Option<R>
where
    F: Fn(u64) -> Option<R>,
{
    range.into_iter().find_map(f)
}

/// All `Some` results over `range`, in index order.
#[cfg(feature = "parallel")]
pub(crate) fn filter_map<R, F>(range: Range<u64>, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(u64) -> Option<R> + Sync + Send,
{
    range.into_par_iter().filter_map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn filter_map<R, F>(range: Range<u64>, f: F) -> Vec<R>
where
    F: Fn(u64) -> Option<R>,
{
    range.into_iter().filter_map(f).collect()
}
