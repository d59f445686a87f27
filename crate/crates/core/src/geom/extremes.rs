//! Extreme points of a point set along many slopes at once.

use std::cmp::Ordering;
use std::ops::Range;

use super::{graham_upper_hull, lex, mergesort, Point, SlopeRat};
use crate::error::{Error, Result};
use crate::iosim::{SimArray, Simulator};

/// The leftmost and rightmost maximisers of `y - s x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Extremes {
    pub min_x: Point,
    pub max_x: Point,
}

fn fold(sim: &mut Simulator, best: &mut Option<Extremes>, s: SlopeRat, cand: Extremes) {
    let Some(cur) = best else {
        *best = Some(cand);
        return;
    };
    sim.count_comparison();
    match s.cmp_offset(&cand.min_x, &cur.min_x) {
        Ordering::Greater => *best = Some(cand),
        Ordering::Equal => {
            sim.count_comparison();
            if cand.min_x.x < cur.min_x.x {
                cur.min_x = cand.min_x;
            }
            sim.count_comparison();
            if cand.max_x.x > cur.max_x.x {
                cur.max_x = cand.max_x;
            }
        }
        Ordering::Less => {}
    }
}

/// One linear scan per slope. The reference for [`multi_slope_extremes`].
pub fn slope_extremes_scan(sim: &mut Simulator, pts: &SimArray<Point>, range: Range<usize>, s: SlopeRat) -> Result<Extremes> {
    if s == SlopeRat::Vertical {
        return Err(Error::VerticalSlope);
    }
    let mut best = None;
    for i in range {
        let p = pts.read(sim, i);
        fold(sim, &mut best, s, Extremes { min_x: p, max_x: p });
    }
    best.ok_or(Error::EmptyInput)
}

/// Extremes of `range` along every slope in `slopes`, which must be sorted
/// in descending order. Points are processed in batches of `k^2`: each
/// batch is sorted, reduced to its upper hull, and the slopes are swept
/// along the hull edges in one forward pass.
pub fn multi_slope_extremes(
    sim: &mut Simulator,
    pts: &SimArray<Point>,
    range: Range<usize>,
    slopes: &[SlopeRat],
) -> Result<Vec<Extremes>> {
    if range.is_empty() {
        return Err(Error::EmptyInput);
    }
    if slopes.contains(&SlopeRat::Vertical) {
        return Err(Error::VerticalSlope);
    }
    debug_assert!(slopes.windows(2).all(|w| w[0] >= w[1]), "slopes must be sorted descending");
    let k = slopes.len();
    if k == 0 {
        return Ok(Vec::new());
    }
    let n = range.len();
    let batch = k.saturating_mul(k).clamp(1, n);
    let mut best: Vec<Option<Extremes>> = vec![None; k];
    let mut buf = SimArray::alloc(sim, batch, pts.peek()[range.start]);

    let mut start = range.start;
    while start < range.end {
        let len = batch.min(range.end - start);
        for i in 0..len {
            let p = pts.read(sim, start + i);
            buf.write(sim, i, p);
        }
        mergesort(sim, &mut buf, 0..len, &mut lex);
        let h = graham_upper_hull(sim, &mut buf, 0..len);

        let mut j = 0;
        for (si, &s) in slopes.iter().enumerate() {
            let mut v = buf.read(sim, j);
            let mut tie = None;
            while j + 1 < h {
                let w = buf.read(sim, j + 1);
                sim.count_comparison();
                match SlopeRat::through(v, w).cmp(&s) {
                    Ordering::Greater => {
                        j += 1;
                        v = w;
                    }
                    Ordering::Equal => {
                        tie = Some(w);
                        break;
                    }
                    Ordering::Less => break,
                }
            }
            let cand = Extremes { min_x: v, max_x: tie.unwrap_or(v) };
            fold(sim, &mut best[si], s, cand);
        }
        start += len;
    }
    buf.free(sim);
    Ok(best.into_iter().map(|b| b.expect("nonempty input")).collect())
}
