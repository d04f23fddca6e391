//! Sequential / parallel execution switch for the data-parallel loops.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::{Error, Result};

/// How data-parallel inner loops are executed.
///
/// `Parallel` silently degrades to sequential execution when the crate is
/// built without the `parallel` feature. Results never depend on the choice.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Execution {
    #[default]
    Parallel,
    Sequential,
}

impl Execution {
    /// True when work will actually be spread over a thread pool.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }

    /// `(0..n).map(f).collect()`, order preserving.
    pub fn map_range<R, F>(self, n: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return (0..n).into_par_iter().map(f).collect();
        }
        (0..n).map(f).collect()
    }

    /// `items.iter().map(f).collect()`, order preserving.
    pub fn map_slice<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }

    /// Fill `out` in chunks of `chunk` elements; `f(chunk_index, chunk)`.
    pub fn for_each_chunk_mut<T, F>(self, out: &mut [T], chunk: usize, f: F)
    where
        T: Send,
        F: Fn(usize, &mut [T]) + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            out.par_chunks_mut(chunk)
                .enumerate()
                .for_each(|(i, c)| f(i, c));
            return;
        }
        out.chunks_mut(chunk).enumerate().for_each(|(i, c)| f(i, c));
    }

    /// Execution for a requested worker count: `Some(1)` is sequential,
    /// other counts size the global pool (first call wins).
    pub fn with_jobs(jobs: Option<usize>) -> Result<Execution> {
        match jobs {
            Some(0) => Err(Error::invalid("--jobs must be positive")),
            Some(1) => Ok(Execution::Sequential),
            #[cfg(feature = "parallel")]
            Some(n) => {
                // an already initialised pool is not an error
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
                Ok(Execution::Parallel)
            }
            _ => Ok(Execution::Parallel),
        }
    }

    /// True iff `pred` holds for every index in `0..n`.
    pub fn all_range<F>(self, n: usize, pred: F) -> bool
    where
        F: Fn(usize) -> bool + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return (0..n).into_par_iter().all(pred);
        }
        (0..n).all(pred)
    }
}
