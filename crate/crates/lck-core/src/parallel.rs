//! Data-parallel helpers for the generator-pair/triple loops.
//!
//! With the `parallel` feature (default) the maps run on rayon; order of the
//! collected results is the index order either way, so reports are
//! deterministic. [`run_sequential`] forces the sequential path at runtime,
//! which is what the benches use to compare both modes in one binary.

use std::cell::Cell;

thread_local! {
    static FORCE_SEQUENTIAL: Cell<bool> = const { Cell::new(false) };
}

/// Runs `f` with the parallel dispatch disabled on this thread.
pub fn run_sequential<R>(f: impl FnOnce() -> R) -> R {
    FORCE_SEQUENTIAL.with(|c| c.set(true));
    let out = f();
    FORCE_SEQUENTIAL.with(|c| c.set(false));
    out
}

#[cfg(feature = "parallel")]
pub(crate) fn indexed_map<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    if FORCE_SEQUENTIAL.with(|c| c.get()) {
        (0..n).map(f).collect()
    } else {
        (0..n).into_par_iter().map(f).collect()
    }
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn indexed_map<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    (0..n).map(f).collect()
}
