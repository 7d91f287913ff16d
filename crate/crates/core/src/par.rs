//! Row-level parallelism for the quadrature engine.
//!
//! With the `parallel` feature, [`Execution::Parallel`] maps rows on the rayon
//! pool; without it, both variants run sequentially. Either way the caller gets
//! results back in row order, so downstream reductions are independent of the
//! thread count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// Whether rows are actually dispatched to a thread pool in this build.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

pub(crate) fn map_rows<T, F>(rows: usize, exec: Execution, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return (0..rows).into_par_iter().map(f).collect();
    }
    let _ = exec;
    (0..rows).map(f).collect()
}
