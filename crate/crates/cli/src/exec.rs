//! Thread pool sized by `VARNORM_THREADS`.

use rayon::prelude::*;
use rayon::{ThreadPool, ThreadPoolBuilder};
use varnorm_core::compactness::Executor;

use crate::error::CliError;

pub const THREADS_VAR: &str = "VARNORM_THREADS";

/// Runs jobs on a rayon pool; results come back in job order, so the
/// thread count never changes a number.
pub struct Parallel {
    pool: ThreadPool,
}

impl Parallel {
    /// `threads = 0` uses every core.
    pub fn new(threads: usize) -> Result<Self, CliError> {
        let pool = ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| CliError::Usage(format!("cannot start thread pool: {e}")))?;
        Ok(Self { pool })
    }

    pub fn from_env() -> Result<Self, CliError> {
        let threads = match std::env::var(THREADS_VAR) {
            Err(_) => 0,
            Ok(v) if v.trim().is_empty() => 0,
            Ok(v) => v.trim().parse().map_err(|_| {
                CliError::Usage(format!(
                    "{THREADS_VAR} must be a non-negative integer, got {v:?}"
                ))
            })?,
        };
        Self::new(threads)
    }

    /// Maps `f` over `0..n` in parallel, keeping index order.
    #[allow(clippy::redundant_closure)] // `F` is only `Sync`; the closure borrows it.
    pub fn map<T: Send, F: Fn(usize) -> T + Sync>(&self, n: usize, f: F) -> Vec<T> {
        self.pool
            .install(|| (0..n).into_par_iter().map(|i| f(i)).collect())
    }
}

impl Executor for Parallel {
    fn run(
        &self,
        jobs: usize,
        job: &(dyn Fn(usize) -> varnorm_core::Result<f64> + Sync),
    ) -> Vec<varnorm_core::Result<f64>> {
        if jobs <= 1 {
            return (0..jobs).map(job).collect();
        }
        self.map(jobs, job)
    }
}
