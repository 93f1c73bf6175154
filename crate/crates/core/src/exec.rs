//! Execution strategy for batch evaluations.
//!
//! Species rows, idempotents, structure constants and congruence checks are
//! independent per index, so they go through [`Exec::map`]. With the
//! `parallel` feature disabled both strategies run sequentially.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::Result;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    /// `[f(0), .., f(n-1)]`, in order.
    pub fn map<T, F>(self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => (0..n).into_par_iter().map(f).collect(),
            _ => (0..n).map(f).collect(),
        }
    }

    /// Like [`Exec::map`], stopping at an error.
    pub fn try_map<T, F>(self, n: usize, f: F) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(usize) -> Result<T> + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => (0..n).into_par_iter().map(f).collect(),
            _ => (0..n).map(f).collect(),
        }
    }

    /// Whether `pred` holds for every index.
    pub fn all<F>(self, n: usize, pred: F) -> bool
    where
        F: Fn(usize) -> bool + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => (0..n).into_par_iter().all(pred),
            _ => (0..n).all(pred),
        }
    }

    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategies_agree() {
        let f = |i: usize| i * i % 7;
        assert_eq!(Exec::Sequential.map(100, f), Exec::Parallel.map(100, f));
        assert!(Exec::Parallel.all(50, |i| i < 50));
        let r: Result<Vec<usize>> = Exec::Parallel.try_map(10, |i| {
            if i == 7 {
                Err(crate::FbrError::input("seven"))
            } else {
                Ok(i)
            }
        });
        assert!(r.is_err());
    }
}
