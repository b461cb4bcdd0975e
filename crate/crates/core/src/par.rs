//! Execution mode for the data-parallel loops.
//!
//! With the `parallel` feature (default) [`Exec::Parallel`] fans work out over
//! rayon's global pool; without it both modes run serially. Results always come
//! back in input order, so the mode never changes an answer.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Exec {
    Serial,
    #[default]
    Parallel,
}

impl Exec {
    /// Map `op` over `items`, preserving order.
    pub fn map<T, R, F>(self, items: Vec<T>, op: F) -> Vec<R>
    where
        T: Send,
        R: Send,
        F: Fn(T) -> R + Sync + Send,
    {
        match self {
            Exec::Serial => items.into_iter().map(op).collect(),
            #[cfg(feature = "parallel")]
            Exec::Parallel => items.into_par_iter().map(op).collect(),
            #[cfg(not(feature = "parallel"))]
            Exec::Parallel => items.into_iter().map(op).collect(),
        }
    }

    /// Map over `0..len`.
    pub fn map_range<R, F>(self, len: usize, op: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send,
    {
        self.map((0..len).collect(), op)
    }

    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }
}
