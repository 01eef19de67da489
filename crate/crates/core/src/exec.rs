//! Execution helpers: data-parallel maps over independent work items.
//!
//! With the `parallel` feature (default) `map` fans out over a rayon pool;
//! without it the same call runs sequentially. Results are collected in
//! input order either way, so outputs are identical across thread counts.
//! `map_seq` is always sequential and exists so benchmarks can compare the
//! two paths in one build.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[cfg(feature = "parallel")]
pub fn map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

/// Sequential reference path, available regardless of features.
pub fn map_seq<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

/// Cap the worker pool at `n` threads. Calling more than once, or after the
/// pool already started, leaves the existing pool in place.
#[cfg(feature = "parallel")]
pub fn init_threads(n: usize) {
    if n == 0 {
        return;
    }
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
}

#[cfg(not(feature = "parallel"))]
pub fn init_threads(_n: usize) {}
