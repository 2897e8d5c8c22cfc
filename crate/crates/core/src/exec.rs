//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (default) [`Execution::Parallel`] fans work out
//! over rayon's global pool; without it every variant runs sequentially.
//! Result order never depends on scheduling.

use std::ops::Range;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How data-parallel loops are executed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// Initial and maximal block sizes for [`find_first`]: candidates are tested
/// in ordered blocks that double in size, so a hit near the start does not pay
/// for the whole range and long scans amortize synchronization.
const SCAN_BLOCK_MIN: u64 = 256;
const SCAN_BLOCK_MAX: u64 = 1 << 16;

pub fn map_range<R, F>(exec: Execution, range: Range<usize>, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return range.into_par_iter().map(f).collect();
    }
    let _ = exec;
    range.map(f).collect()
}

pub fn map_slice<T, R, F>(exec: Execution, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return items.par_iter().map(f).collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}

/// Smallest `i` in `range` with `pred(i)`, identical for both execution modes.
pub fn find_first<F>(exec: Execution, range: Range<u64>, pred: F) -> Option<u64>
where
    F: Fn(u64) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        let mut start = range.start;
        let mut block = SCAN_BLOCK_MIN;
        while start < range.end {
            let end = range.end.min(start.saturating_add(block));
            if let Some(i) = (start..end).into_par_iter().find_first(|&i| pred(i)) {
                return Some(i);
            }
            start = end;
            block = (block * 2).min(SCAN_BLOCK_MAX);
        }
        return None;
    }
    let _ = (exec, SCAN_BLOCK_MIN, SCAN_BLOCK_MAX);
    range.into_iter().find(|&i| pred(i))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        for exec in [Execution::Sequential, Execution::Parallel] {
            assert_eq!(map_range(exec, 0..5, |i| i * i), vec![0, 1, 4, 9, 16]);
            assert_eq!(map_slice(exec, &[1, 2, 3], |x| x + 1), vec![2, 3, 4]);
            assert_eq!(
                find_first(exec, 0..10_000, |i| i % 1237 == 1236),
                Some(1236)
            );
            assert_eq!(find_first(exec, 3..3, |_| true), None);
            assert_eq!(find_first(exec, 0..2000, |_| false), None);
        }
    }
}
