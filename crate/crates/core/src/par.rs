//! Execution policy for the data-parallel loops (matrix entries, study cells,
//! error grids). Without the `parallel` feature every policy runs sequentially.
//!
//! Each work item is computed independently with a fixed internal summation
//! order, so results are bit-identical under either policy.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
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

/// Evaluates `f(0..len)`, collecting results in index order; stops on (one
/// of) the first errors.
pub(crate) fn try_map_indices<T, E, F>(exec: Execution, len: usize, f: F) -> Result<Vec<T>, E>
where
    T: Send,
    E: Send,
    F: Fn(usize) -> Result<T, E> + Send + Sync,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => (0..len).into_par_iter().map(f).collect(),
        _ => (0..len).map(f).collect(),
    }
}
