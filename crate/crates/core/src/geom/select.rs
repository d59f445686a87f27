//! Deterministic linear-time selection.

use std::cmp::Ordering;
use std::ops::Range;

use crate::iosim::{Element, SimArray, Simulator};

#[inline]
pub(crate) fn charged<T, F>(sim: &mut Simulator, cmp: &mut F, a: &T, b: &T) -> Ordering
where
    F: FnMut(&T, &T) -> Ordering,
{
    sim.count_comparison();
    cmp(a, b)
}

pub(crate) fn insertion_sort<T, F>(sim: &mut Simulator, arr: &mut SimArray<T>, lo: usize, hi: usize, cmp: &mut F)
where
    T: Element,
    F: FnMut(&T, &T) -> Ordering,
{
    for i in lo + 1..hi {
        let x = arr.read(sim, i);
        let mut j = i;
        while j > lo {
            let y = arr.read(sim, j - 1);
            if charged(sim, cmp, &y, &x) != Ordering::Greater {
                break;
            }
            arr.write(sim, j, y);
            j -= 1;
        }
        if j != i {
            arr.write(sim, j, x);
        }
    }
}

/// Three-way partition of `[lo, hi)` by `class`; returns `(lt, gt)` with
/// `[lo, lt)` classed `Less`, `[lt, gt)` `Equal` and `[gt, hi)` `Greater`.
fn partition3<T, C>(sim: &mut Simulator, arr: &mut SimArray<T>, lo: usize, hi: usize, mut class: C) -> (usize, usize)
where
    T: Element,
    C: FnMut(&mut Simulator, &T) -> Ordering,
{
    let (mut lt, mut i, mut gt) = (lo, lo, hi);
    while i < gt {
        let x = arr.read(sim, i);
        match class(sim, &x) {
            Ordering::Less => {
                arr.swap(sim, lt, i);
                lt += 1;
                i += 1;
            }
            Ordering::Greater => {
                gt -= 1;
                arr.swap(sim, i, gt);
            }
            Ordering::Equal => i += 1,
        }
    }
    (lt, gt)
}

fn median_of_medians<T, F>(sim: &mut Simulator, arr: &mut SimArray<T>, lo: usize, hi: usize, cmp: &mut F) -> T
where
    T: Element,
    F: FnMut(&T, &T) -> Ordering,
{
    let mut groups = 0;
    let mut g = lo;
    while g < hi {
        let end = (g + 5).min(hi);
        insertion_sort(sim, arr, g, end, cmp);
        arr.swap(sim, lo + groups, g + (end - g - 1) / 2);
        groups += 1;
        g = end;
    }
    select_rank(sim, arr, lo..lo + groups, (groups - 1) / 2, cmp)
}

/// From this size on, rounds use two sampled pivots; below it, a single
/// pseudo-median pivot.
const SAMPLE_MIN: usize = 1024;

fn median3<T, F>(sim: &mut Simulator, cmp: &mut F, a: T, b: T, c: T) -> T
where
    T: Element,
    F: FnMut(&T, &T) -> Ordering,
{
    let (lo, hi) = if charged(sim, cmp, &a, &b) == Ordering::Greater { (b, a) } else { (a, b) };
    if charged(sim, cmp, &c, &lo) == Ordering::Less {
        lo
    } else if charged(sim, cmp, &c, &hi) == Ordering::Greater {
        hi
    } else {
        c
    }
}

/// Median of three medians of three, from nine evenly spaced elements.
fn ninther<T, F>(sim: &mut Simulator, arr: &SimArray<T>, lo: usize, hi: usize, cmp: &mut F) -> T
where
    T: Element,
    F: FnMut(&T, &T) -> Ordering,
{
    let step = (hi - lo) / 9;
    let at = |sim: &mut Simulator, i: usize| arr.read(sim, lo + step / 2 + i * step);
    let mut m = [arr.read(sim, lo); 3];
    for (g, slot) in m.iter_mut().enumerate() {
        let (a, b, c) = (at(sim, 3 * g), at(sim, 3 * g + 1), at(sim, 3 * g + 2));
        *slot = median3(sim, cmp, a, b, c);
    }
    median3(sim, cmp, m[0], m[1], m[2])
}

/// Two pivots expected to bracket rank `k - lo` closely, chosen from a
/// sample of about `n^(2/3)` elements taken as evenly spread contiguous runs.
fn sample_pivots<T, F>(sim: &mut Simulator, arr: &SimArray<T>, lo: usize, hi: usize, k: usize, cmp: &mut F) -> (T, T)
where
    T: Element,
    F: FnMut(&T, &T) -> Ordering,
{
    let n = hi - lo;
    let size = ((n as f64).powf(2.0 / 3.0) as usize).clamp(16, n / 4);
    let runs = (size as f64).sqrt() as usize;
    let run_len = size / runs;
    let size = runs * run_len;
    let first = arr.read(sim, lo);
    let mut sample = SimArray::alloc(sim, size, first);
    for r in 0..runs {
        let from = lo + r * (n - run_len) / (runs - 1).max(1);
        for j in 0..run_len {
            let v = arr.read(sim, from + j);
            sample.write(sim, r * run_len + j, v);
        }
    }
    let target = (k - lo) * size / n;
    let delta = (size as f64).sqrt() as usize + 1;
    let (ra, rb) = (target.saturating_sub(delta), (target + delta).min(size - 1));
    let a = select_rank(sim, &mut sample, 0..size, ra, cmp);
    let b = select_rank(sim, &mut sample, ra..size, rb - ra, cmp);
    sample.free(sim);
    (a, b)
}

/// Returns the element of rank `rank` (0-based, relative to `range.start`)
/// under `cmp`. On return `range` is partitioned around it: everything
/// before position `range.start + rank` compares `<=` and everything after
/// compares `>=`. Every comparator call is charged.
///
/// Large ranges are narrowed with two sampled pivots in a single pass,
/// smaller ones with a ninther pivot. A round that fails to shrink the
/// range enough is followed by a median-of-medians round, which keeps the
/// worst case linear.
pub fn select_rank<T, F>(sim: &mut Simulator, arr: &mut SimArray<T>, range: Range<usize>, rank: usize, cmp: &mut F) -> T
where
    T: Element,
    F: FnMut(&T, &T) -> Ordering,
{
    let (mut lo, mut hi) = (range.start, range.end);
    assert!(rank < hi - lo, "rank {rank} out of range for {} elements", hi - lo);
    let k = lo + rank;
    let mut sampled = true;
    loop {
        let n = hi - lo;
        if n <= 8 {
            insertion_sort(sim, arr, lo, hi, cmp);
            return arr.read(sim, k);
        }
        if sampled && n >= SAMPLE_MIN {
            let (a, b) = sample_pivots(sim, arr, lo, hi, k, cmp);
            // test first against the pivot more elements fall outside of
            let low_first = 2 * (k - lo) >= n;
            let (lt, gt) = partition3(sim, arr, lo, hi, |sim, x| {
                if low_first {
                    if charged(sim, cmp, x, &a) == Ordering::Less {
                        return Ordering::Less;
                    }
                    if charged(sim, cmp, x, &b) == Ordering::Greater {
                        return Ordering::Greater;
                    }
                } else {
                    if charged(sim, cmp, x, &b) == Ordering::Greater {
                        return Ordering::Greater;
                    }
                    if charged(sim, cmp, x, &a) == Ordering::Less {
                        return Ordering::Less;
                    }
                }
                Ordering::Equal
            });
            if (lt..gt).contains(&k) && charged(sim, cmp, &a, &b) == Ordering::Equal {
                return a;
            }
            (lo, hi) = if k < lt {
                (lo, lt)
            } else if k >= gt {
                (gt, hi)
            } else {
                (lt, gt)
            };
            sampled = 4 * (hi - lo) <= 3 * n;
            continue;
        }
        let pivot = if !sampled {
            median_of_medians(sim, arr, lo, hi, cmp)
        } else if n >= 27 {
            ninther(sim, arr, lo, hi, cmp)
        } else {
            let (a, b, c) = (arr.read(sim, lo), arr.read(sim, lo + n / 2), arr.read(sim, hi - 1));
            median3(sim, cmp, a, b, c)
        };
        let (lt, gt) = partition3(sim, arr, lo, hi, |sim, x| charged(sim, cmp, x, &pivot));
        if k < lt {
            hi = lt;
        } else if k >= gt {
            lo = gt;
        } else {
            return pivot;
        }
        sampled = !sampled || 4 * (hi - lo) <= 3 * n;
    }
}
