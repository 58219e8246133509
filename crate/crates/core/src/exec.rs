//! Row-parallel helpers with a sequential fallback.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How row-wise work inside a single operation is scheduled.
///
/// `Parallel` silently degrades to `Sequential` when the crate is built without
/// the `parallel` feature. Output is bit-identical in both modes: every row is
/// processed independently with the same arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
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
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// Applies `f(row_index, row)` to every length-`width` row of `data`.
pub(crate) fn for_each_row<F>(exec: Execution, data: &mut [crate::C64], width: usize, f: F)
where
    F: Fn(usize, &mut [crate::C64]) + Send + Sync,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        data.par_chunks_mut(width)
            .enumerate()
            .for_each(|(i, row)| f(i, row));
        return;
    }
    let _ = exec;
    data.chunks_mut(width).enumerate().for_each(|(i, row)| f(i, row));
}

/// Like [`for_each_row`], with a per-worker scratch value built by `init`.
pub(crate) fn for_each_row_with<S, I, F>(
    exec: Execution,
    data: &mut [crate::C64],
    width: usize,
    init: I,
    f: F,
) where
    I: Fn() -> S + Send + Sync,
    F: Fn(&mut S, usize, &mut [crate::C64]) + Send + Sync,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        data.par_chunks_mut(width)
            .enumerate()
            .for_each_init(&init, |scratch, (i, row)| f(scratch, i, row));
        return;
    }
    let _ = exec;
    let mut scratch = init();
    data.chunks_mut(width)
        .enumerate()
        .for_each(|(i, row)| f(&mut scratch, i, row));
}
