//! Thin wrappers over the data-parallel inner loops.
//!
//! With the `parallel` feature (the default) these dispatch to rayon; without
//! it they run sequentially with identical results. Every caller merges
//! integer partials, so the output is bit-identical for any thread count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Folds `fold` over indices `0..n` starting from `init()`, merging partial
/// accumulators with `merge`.
#[cfg(feature = "parallel")]
pub(crate) fn accumulate<T, I, F, M>(n: u64, init: I, fold: F, merge: M) -> T
where
    T: Send,
    I: Fn() -> T + Send + Sync,
    F: Fn(T, u64) -> T + Send + Sync,
    M: Fn(T, T) -> T + Send + Sync,
{
    (0..n)
        .into_par_iter()
        .fold(&init, &fold)
        .reduce(&init, merge)
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn accumulate<T, I, F, M>(n: u64, init: I, fold: F, _merge: M) -> T
where
    I: Fn() -> T,
    F: Fn(T, u64) -> T,
    M: Fn(T, T) -> T,
{
    (0..n).fold(init(), fold)
}

/// Applies `f` to equal-sized disjoint chunks of `data`.
#[cfg(feature = "parallel")]
pub(crate) fn for_each_chunk<T, F>(data: &mut [T], chunk: usize, f: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Send + Sync,
{
    data.par_chunks_mut(chunk)
        .enumerate()
        .for_each(|(i, c)| f(i, c));
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn for_each_chunk<T, F>(data: &mut [T], chunk: usize, f: F)
where
    F: Fn(usize, &mut [T]),
{
    for (i, c) in data.chunks_mut(chunk).enumerate() {
        f(i, c);
    }
}

/// Runs `f` inside a dedicated thread pool with `threads` workers.
///
/// Results are identical for any worker count; this only bounds parallelism.
#[cfg(feature = "parallel")]
pub fn run_with_threads<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> R {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("building a thread pool")
        .install(f)
}

/// Sequential build: the thread count is ignored.
#[cfg(not(feature = "parallel"))]
pub fn run_with_threads<R: Send>(_threads: usize, f: impl FnOnce() -> R + Send) -> R {
    f()
}
