//! Reductions whose floating-point result does not depend on the number of
//! threads.
//!
//! Work is cut into fixed blocks of [`BLOCK`] items. Each block is folded
//! sequentially, and the block partials are then added left to right. With the
//! `parallel` feature the blocks are evaluated on the rayon pool; the grouping,
//! and therefore every rounding, is the same as in the sequential build.

use alloc::vec::Vec;
use core::ops::Add;

/// Items per block.
pub const BLOCK: usize = 512;

/// `Σ_i f(i)` for `i in 0..n`, block-ordered.
pub fn sum_range<T, F>(n: usize, f: F) -> T
where
    T: Add<Output = T> + Default + Send,
    F: Fn(usize) -> T + Sync,
{
    let blocks = n.div_ceil(BLOCK);
    let block = |b: usize| {
        let lo = b * BLOCK;
        let hi = (lo + BLOCK).min(n);
        (lo..hi).fold(T::default(), |acc, i| acc + f(i))
    };
    let partials = map_blocks(blocks, block);
    partials.into_iter().fold(T::default(), |acc, p| acc + p)
}

/// `Σ f(item)`, block-ordered.
pub fn sum_slice<I, T, F>(items: &[I], f: F) -> T
where
    I: Sync,
    T: Add<Output = T> + Default + Send,
    F: Fn(&I) -> T + Sync,
{
    sum_range(items.len(), |i| f(&items[i]))
}

/// `f(i)` for `i in 0..n`, in order, possibly evaluated in parallel.
pub fn map_range<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    map_blocks(n, f)
}

#[cfg(feature = "parallel")]
fn map_blocks<T: Send, F: Fn(usize) -> T + Sync>(n: usize, f: F) -> Vec<T> {
    use rayon::prelude::*;
    (0..n).into_par_iter().map(|i| f(i)).collect()
}

#[cfg(not(feature = "parallel"))]
fn map_blocks<T: Send, F: Fn(usize) -> T + Sync>(n: usize, f: F) -> Vec<T> {
    (0..n).map(f).collect()
}
