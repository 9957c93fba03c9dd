//! Sequential or rayon-backed evaluation of index-addressed work.
//!
//! Results are always returned in index order, so any per-item randomness
//! keyed by index gives the same output regardless of the backend or thread
//! count.

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    #[cfg_attr(not(feature = "parallel"), default)]
    Sequential,
    #[cfg(feature = "parallel")]
    #[default]
    Parallel,
}

impl Execution {
    pub fn map_indexed<T, F>(self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            Execution::Sequential => (0..n).map(f).collect(),
            #[cfg(feature = "parallel")]
            Execution::Parallel => {
                use rayon::prelude::*;
                (0..n).into_par_iter().map(f).collect()
            }
        }
    }
}

/// Runs `op` with at most `threads` workers; `None` uses every core.
///
/// Without the `parallel` feature this just calls `op`.
pub fn with_threads<R: Send>(threads: Option<usize>, op: impl FnOnce() -> R + Send) -> R {
    #[cfg(feature = "parallel")]
    if let Some(n) = threads {
        if let Ok(pool) = rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
        {
            return pool.install(op);
        }
    }
    #[cfg(not(feature = "parallel"))]
    let _ = threads;
    op()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn backends_agree() {
        let f = |i: usize| (i as f64).sqrt().sin();
        let seq = Execution::Sequential.map_indexed(10_000, f);
        assert_eq!(seq, Execution::default().map_indexed(10_000, f));
        assert_eq!(
            seq,
            with_threads(Some(3), || Execution::default().map_indexed(10_000, f))
        );
    }
}
