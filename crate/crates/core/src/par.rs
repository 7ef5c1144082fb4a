//! Index-ordered parallel map over `0..n`, with a sequential build when the
//! `parallel` feature is off. Results are always returned in index order.
//! Without an explicit worker count the pool size comes from `AFW_WORKERS`
//! or, failing that, from rayon's default.

use crate::error::Result;

#[cfg(feature = "parallel")]
pub(crate) fn map<T: Send>(n: usize, workers: Option<usize>, f: impl Fn(usize) -> T + Sync + Send) -> Result<Vec<T>> {
    use rayon::prelude::*;

    let run = || (0..n).into_par_iter().map(&f).collect::<Vec<T>>();
    match workers.or_else(crate::campaign::env_workers) {
        Some(w) => Ok(rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .map_err(|e| crate::error::Error::Config(format!("cannot start {w} workers: {e}")))?
            .install(run)),
        None => Ok(run()),
    }
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map<T>(n: usize, _workers: Option<usize>, f: impl Fn(usize) -> T) -> Result<Vec<T>> {
    Ok((0..n).map(f).collect())
}
