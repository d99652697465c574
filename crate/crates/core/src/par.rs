//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature the [`Execution::Parallel`] strategy maps over
//! rayon's thread pool; without it every strategy runs sequentially. Results
//! are always returned in input order, so reports assembled from them are
//! deterministic regardless of scheduling.

/// How a batch of independent jobs is executed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Execution {
    Sequential,
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

/// Maps `f` over `items`, preserving order.
pub fn map<T, R, F>(exec: Execution, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}

/// Maps `f` over `0..n`, preserving order.
pub fn map_range<R, F>(exec: Execution, n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..n).into_par_iter().map(f).collect()
        }
        _ => (0..n).map(f).collect(),
    }
}

/// Fills the rows of a row-major buffer, `row_len` entries per row.
pub fn fill_rows<T, F>(exec: Execution, data: &mut [T], row_len: usize, f: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Sync + Send,
{
    if row_len == 0 {
        return;
    }
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            data.par_chunks_mut(row_len)
                .enumerate()
                .for_each(|(i, row)| f(i, row));
        }
        _ => data
            .chunks_mut(row_len)
            .enumerate()
            .for_each(|(i, row)| f(i, row)),
    }
}
