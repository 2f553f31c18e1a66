use modalcomb_core::Executor;
use rayon::prelude::*;

/// Runs tasks on a fixed-size rayon pool; results keep task order.
pub struct ThreadedExecutor {
    pool: rayon::ThreadPool,
}

impl ThreadedExecutor {
    pub fn new(threads: usize) -> Result<Self, rayon::ThreadPoolBuildError> {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads.max(1)).build()?;
        Ok(Self { pool })
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }
}

impl Executor for ThreadedExecutor {
    fn map<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        self.pool.install(|| (0..n).into_par_iter().map(f).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keeps_order() {
        let ex = ThreadedExecutor::new(4).unwrap();
        assert_eq!(ex.map(100, |i| i * i), (0..100).map(|i| i * i).collect::<Vec<_>>());
        assert_eq!(ex.threads(), 4);
    }
}
