//! Data-parallel sweep helpers.
//!
//! Every sweep in the crate (radii fans, parameter grids, oracle batteries)
//! maps a pure function over immutable inputs, so the parallel and sequential
//! paths are interchangeable. With the `parallel` feature (default) the
//! generic [`map_slice`] dispatches to rayon; without it, to the sequential
//! loop. [`map_slice_seq`] is always sequential and serves as the benchmark
//! baseline.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `f` over `items`, in parallel when the `parallel` feature is on.
#[cfg(feature = "parallel")]
pub fn map_slice<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    items.par_iter().map(f).collect()
}

/// Maps `f` over `items`, in parallel when the `parallel` feature is on.
#[cfg(not(feature = "parallel"))]
pub fn map_slice<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(f).collect()
}

/// Sequential map, kept available regardless of features.
pub fn map_slice_seq<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(f).collect()
}
