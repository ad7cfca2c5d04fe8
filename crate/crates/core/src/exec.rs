//! Sequential or data-parallel evaluation over independent items.
//!
//! Results are always returned in input order, so both strategies produce
//! identical output. Without the `parallel` feature, [`Execution::Parallel`]
//! runs sequentially.

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

impl Execution {
    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(usize, &T) -> R + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => items.par_iter().enumerate().map(|(i, t)| f(i, t)).collect(),
            _ => items.iter().enumerate().map(|(i, t)| f(i, t)).collect(),
        }
    }

    /// Like [`map`](Self::map) but stops at an error. When several items
    /// fail, the error of the lowest index is returned under both
    /// strategies.
    pub fn try_map<T, R, E, F>(self, items: &[T], f: F) -> Result<Vec<R>, E>
    where
        T: Sync,
        R: Send,
        E: Send,
        F: Fn(usize, &T) -> Result<R, E> + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => {
                let results: Vec<Result<R, E>> = items.par_iter().enumerate().map(|(i, t)| f(i, t)).collect();
                results.into_iter().collect()
            }
            _ => items.iter().enumerate().map(|(i, t)| f(i, t)).collect(),
        }
    }

    /// Maps each item and folds the results with an associative `merge`.
    pub fn map_reduce<T, R, F, M>(self, items: &[T], identity: impl Fn() -> R + Sync + Send, f: F, merge: M) -> R
    where
        T: Sync,
        R: Send,
        F: Fn(usize, &T) -> R + Sync + Send,
        M: Fn(R, R) -> R + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => items.par_iter().enumerate().map(|(i, t)| f(i, t)).reduce(&identity, &merge),
            _ => items.iter().enumerate().map(|(i, t)| f(i, t)).fold(identity(), &merge),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategies_agree() {
        let items: Vec<u64> = (0..1000).collect();
        let a = Execution::Sequential.map(&items, |i, x| x * 3 + i as u64);
        let b = Execution::Parallel.map(&items, |i, x| x * 3 + i as u64);
        assert_eq!(a, b);

        let sa = Execution::Sequential.map_reduce(&items, || 0u64, |_, x| *x, |a, b| a + b);
        let sb = Execution::Parallel.map_reduce(&items, || 0u64, |_, x| *x, |a, b| a + b);
        assert_eq!(sa, sb);
    }

    #[test]
    fn first_error_wins() {
        let items: Vec<u32> = (0..500).collect();
        let f = |_: usize, x: &u32| if *x % 97 == 96 { Err(*x) } else { Ok(*x) };
        assert_eq!(Execution::Sequential.try_map(&items, f), Err(96));
        assert_eq!(Execution::Parallel.try_map(&items, f), Err(96));
    }
}
