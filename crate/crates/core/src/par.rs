//! Execution-mode switch between rayon data parallelism and a sequential
//! fallback.
//!
//! Every data-parallel loop in the crate is order-independent, so both
//! modes produce identical results; the engine tests assert this.

/// How data-parallel loops are executed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Uses the current rayon thread pool. Falls back to sequential when
    /// the crate is built without the `parallel` feature.
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

/// Maps `f` over `0..n` and collects the results in index order.
pub fn map_indexed<T, F>(mode: Execution, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    match mode {
        Execution::Sequential => (0..n).map(f).collect(),
        Execution::Parallel => par_map_indexed(n, &f),
    }
}

#[cfg(feature = "parallel")]
fn par_map_indexed<T, F>(n: usize, f: &F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn par_map_indexed<T, F>(n: usize, f: &F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    (0..n).map(f).collect()
}

/// Maps `f` over a slice and collects the results in order.
pub fn map_slice<S, T, F>(mode: Execution, items: &[S], f: F) -> Vec<T>
where
    S: Sync,
    T: Send,
    F: Fn(&S) -> T + Sync,
{
    match mode {
        Execution::Sequential => items.iter().map(&f).collect(),
        Execution::Parallel => par_map_slice(items, &f),
    }
}

#[cfg(feature = "parallel")]
fn par_map_slice<S, T, F>(items: &[S], f: &F) -> Vec<T>
where
    S: Sync,
    T: Send,
    F: Fn(&S) -> T + Sync,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn par_map_slice<S, T, F>(items: &[S], f: &F) -> Vec<T>
where
    S: Sync,
    T: Send,
    F: Fn(&S) -> T + Sync,
{
    items.iter().map(f).collect()
}
