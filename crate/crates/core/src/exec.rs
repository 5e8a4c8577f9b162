//! Sequential / parallel execution switch.
//!
//! Work items are always processed in index order from the caller's point of
//! view: parallel maps collect into the original order and every reduction used
//! in this crate is exact (integer counts), so `Sequential` and `Parallel`
//! produce identical results.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Defaults to `Parallel` when the `parallel` feature is on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    #[cfg_attr(not(feature = "parallel"), default)]
    Sequential,
    #[cfg(feature = "parallel")]
    #[default]
    Parallel,
}

impl Execution {
    /// `f(i)` for `i in 0..n`, collected in order.
    pub fn map_range<R, F>(self, n: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send,
    {
        match self {
            Execution::Sequential => (0..n).map(f).collect(),
            #[cfg(feature = "parallel")]
            Execution::Parallel => (0..n).into_par_iter().map(f).collect(),
        }
    }

    /// Applies `f` to consecutive chunks of `items`, collected in order.
    pub fn map_chunks<T, R, F>(self, items: &[T], chunk_len: usize, f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&[T]) -> R + Sync + Send,
    {
        let chunk_len = chunk_len.max(1);
        match self {
            Execution::Sequential => items.chunks(chunk_len).map(f).collect(),
            #[cfg(feature = "parallel")]
            Execution::Parallel => items.par_chunks(chunk_len).map(f).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_range_keeps_order() {
        let out = Execution::default().map_range(100, |i| i * i);
        assert_eq!(out, (0..100).map(|i| i * i).collect::<Vec<_>>());
    }

    #[test]
    fn chunks_match_sequential() {
        let data: Vec<u32> = (0..1000).collect();
        let seq = Execution::Sequential.map_chunks(&data, 64, |c| c.iter().sum::<u32>());
        let def = Execution::default().map_chunks(&data, 64, |c| c.iter().sum::<u32>());
        assert_eq!(seq, def);
    }
}
