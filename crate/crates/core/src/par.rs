//! Execution mode for the batch entry points.
//!
//! With the `parallel` feature (default) the batch helpers fan out over rayon's
//! global pool; without it, or with [`ExecMode::Sequential`], they run on the
//! calling thread. Results are identical and in input order either way.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExecMode {
    Sequential,
    #[default]
    Parallel,
}

impl ExecMode {
    /// Whether this mode will actually use more than one thread.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == ExecMode::Parallel
    }
}

/// Order-preserving map over a slice.
pub fn map<T, U, F>(mode: ExecMode, items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        return items.par_iter().map(f).collect();
    }
    let _ = mode;
    items.iter().map(f).collect()
}

/// Order-preserving map over `lo..hi`.
pub fn map_range<U, F>(mode: ExecMode, lo: u64, hi: u64, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(u64) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        return (lo..hi).into_par_iter().map(f).collect();
    }
    let _ = mode;
    (lo..hi).map(f).collect()
}

/// Smallest `i` in `lo..hi` with `pred(i)`.
pub fn find_first<F>(mode: ExecMode, lo: u64, hi: u64, pred: F) -> Option<u64>
where
    F: Fn(u64) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        return (lo..hi).into_par_iter().find_first(|&i| pred(i));
    }
    let _ = mode;
    (lo..hi).find(|&i| pred(i))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        let xs: Vec<u64> = (0..1000).collect();
        let a = map(ExecMode::Sequential, &xs, |x| x * x);
        let b = map(ExecMode::Parallel, &xs, |x| x * x);
        assert_eq!(a, b);
        assert_eq!(
            map_range(ExecMode::Sequential, 3, 90, |x| x % 7),
            map_range(ExecMode::Parallel, 3, 90, |x| x % 7)
        );
        for mode in [ExecMode::Sequential, ExecMode::Parallel] {
            assert_eq!(
                find_first(mode, 0, 10_000, |i| i > 10 && i % 97 == 0),
                Some(97)
            );
            assert_eq!(find_first(mode, 0, 50, |i| i > 60), None);
        }
    }
}
