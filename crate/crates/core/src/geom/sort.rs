//! Stable top-down binary mergesort with a ping-pong buffer.

use std::cmp::Ordering;
use std::ops::Range;

use super::select::charged;
use crate::iosim::{Element, SimArray, Simulator};

/// Sorts `range` of `arr` stably under `cmp`.
pub fn mergesort<T, F>(sim: &mut Simulator, arr: &mut SimArray<T>, range: Range<usize>, cmp: &mut F)
where
    T: Element,
    F: FnMut(&T, &T) -> Ordering,
{
    let (lo, n) = (range.start, range.len());
    if n <= 1 {
        return;
    }
    let mut tmp = SimArray::alloc(sim, n, arr.peek()[lo]);
    for i in 0..n {
        let v = arr.read(sim, lo + i);
        tmp.write(sim, i, v);
    }
    // sort tmp's contents into arr
    split_merge(sim, &mut tmp, 0, arr, lo, 0, n, cmp);
    tmp.free(sim);
}

/// Sorts logical `[a, b)` from `src` into `dst`; both hold the same data on
/// entry. Logical index `i` lives at `src[so + i]` and `dst[d0 + i]`.
#[allow(clippy::too_many_arguments)]
fn split_merge<T, F>(
    sim: &mut Simulator,
    src: &mut SimArray<T>,
    so: usize,
    dst: &mut SimArray<T>,
    d0: usize,
    a: usize,
    b: usize,
    cmp: &mut F,
) where
    T: Element,
    F: FnMut(&T, &T) -> Ordering,
{
    if b - a <= 1 {
        return;
    }
    let mid = a + (b - a) / 2;
    split_merge(sim, dst, d0, src, so, a, mid, cmp);
    split_merge(sim, dst, d0, src, so, mid, b, cmp);
    let (mut i, mut j) = (a, mid);
    for k in a..b {
        let v = if i < mid && j < b {
            let (x, y) = (src.read(sim, so + i), src.read(sim, so + j));
            if charged(sim, cmp, &x, &y) != Ordering::Greater {
                i += 1;
                x
            } else {
                j += 1;
                y
            }
        } else if i < mid {
            i += 1;
            src.read(sim, so + i - 1)
        } else {
            j += 1;
            src.read(sim, so + j - 1)
        };
        dst.write(sim, d0 + k, v);
    }
}
