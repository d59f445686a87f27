//! Simultaneous bridge finding across all bucket boundaries.

use std::cmp::Ordering;
use std::ops::Range;

use crate::geom::{graham_upper_hull, lex, mergesort, multi_slope_extremes, select_rank, Point, SlopeRat};
use crate::iosim::{SimArray, Simulator};

/// Upper-hull edge crossing boundary `boundary`. Boundaries are stored
/// doubled, so `2 * left.x < bound2 < 2 * right.x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bridge {
    pub left: Point,
    pub right: Point,
    pub boundary: usize,
}

/// Which side of its boundary the extreme points of a collection fell on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExtremeSide {
    Left,
    Right,
}

/// State of the collections after one pruning round, for tests and
/// measurements.
pub struct RoundProbe<'a> {
    pub before: usize,
    pub after: usize,
    /// Points that belonged to a pair at the start of the round.
    pub paired: usize,
    pub members: &'a [Point],
    /// Every point the bridges are defined over.
    pub points: &'a [Point],
    /// Doubled abscissae of the boundaries still without a bridge.
    pub unfound: Vec<i64>,
}

#[derive(Clone, Copy, Debug)]
struct Collection {
    boundary: usize,
    start: usize,
    len: usize,
}

fn ceil_log2(n: usize) -> usize {
    (usize::BITS - (n.max(2) - 1).leading_zeros()) as usize
}

/// One pruning pass over the pairs `(2j, 2j + 1)` of `src[range]`, writing
/// kept points to `dst` from `w` on. Vertical pairs and duplicates lose
/// their lower point; otherwise, with the extremes along `m` on `side` of
/// the boundary, pairs of slope `>= m` lose their left point (`Left`) or
/// pairs of slope `<= m` lose their right point (`Right`). An odd last
/// point is kept. Returns the new write position.
pub fn ks_prune_round(
    sim: &mut Simulator,
    coll: &mut SimArray<Point>,
    range: Range<usize>,
    mut w: usize,
    rule: Option<(SlopeRat, ExtremeSide)>,
) -> usize {
    let len = range.len();
    for j in 0..len / 2 {
        let a = coll.read(sim, range.start + 2 * j);
        let b = coll.read(sim, range.start + 2 * j + 1);
        let (p, q) = if lex(&a, &b) == Ordering::Greater { (b, a) } else { (a, b) };
        sim.count_comparison();
        let keep: [Option<Point>; 2] = if p.x == q.x {
            [None, Some(q)]
        } else {
            let s = SlopeRat::through(p, q);
            match rule {
                Some((m, ExtremeSide::Left)) => {
                    sim.count_comparison();
                    if s >= m { [None, Some(q)] } else { [Some(p), Some(q)] }
                }
                Some((m, ExtremeSide::Right)) => {
                    sim.count_comparison();
                    if s <= m { [Some(p), None] } else { [Some(p), Some(q)] }
                }
                None => [Some(p), Some(q)],
            }
        };
        for v in keep.into_iter().flatten() {
            coll.write(sim, w, v);
            w += 1;
        }
    }
    if len % 2 == 1 {
        let v = coll.read(sim, range.end - 1);
        coll.write(sim, w, v);
        w += 1;
    }
    w
}

/// Finds the upper-hull edge crossing each boundary between consecutive
/// buckets. `buckets` must be x-ordered and strictly separated, with
/// `2 * max_x(B_i) < bounds2[i] < 2 * min_x(B_{i+1})`.
pub fn multi_bridge<'f>(
    sim: &mut Simulator,
    arr: &SimArray<Point>,
    buckets: &[Range<usize>],
    bounds2: &[i64],
    mut probe: Option<&mut (dyn FnMut(&RoundProbe) + 'f)>,
) -> Vec<Bridge> {
    let k = bounds2.len();
    assert_eq!(buckets.len(), k + 1, "one boundary between each pair of buckets");
    let mut found: Vec<Option<(Point, Point)>> = vec![None; k];
    if k == 0 {
        return Vec::new();
    }
    let n: usize = buckets.iter().map(|b| b.len()).sum();
    let threshold = n.div_ceil(ceil_log2(n));

    let cap: usize = (0..k).map(|i| buckets[i].len() + buckets[i + 1].len()).sum();
    let mut coll = SimArray::alloc(sim, cap, Point::default());
    let mut colls = Vec::with_capacity(k);
    let mut w = 0;
    for i in 0..k {
        let start = w;
        for r in [buckets[i].clone(), buckets[i + 1].clone()] {
            for idx in r {
                let p = arr.read(sim, idx);
                coll.write(sim, w, p);
                w += 1;
            }
        }
        colls.push(Collection { boundary: i, start, len: w - start });
    }
    let mut slopes = SimArray::alloc(sim, cap / 2 + 1, SlopeRat::Vertical);
    let everything: Vec<Point> = match probe {
        Some(_) => buckets.iter().flat_map(|b| arr.peek()[b.clone()].iter().copied()).collect(),
        None => Vec::new(),
    };

    loop {
        let total: usize = colls.iter().map(|c| c.len).sum();
        if colls.is_empty() || total <= threshold {
            break;
        }
        // median pair slope of every collection
        let mut meds: Vec<(SlopeRat, usize)> = Vec::new();
        let mut so = 0;
        for (ci, c) in colls.iter().enumerate() {
            let s0 = so;
            for j in 0..c.len / 2 {
                let p = coll.read(sim, c.start + 2 * j);
                let q = coll.read(sim, c.start + 2 * j + 1);
                sim.count_comparison();
                if p.x != q.x {
                    slopes.write(sim, so, SlopeRat::through(p, q));
                    so += 1;
                }
            }
            if so > s0 {
                let m = select_rank(sim, &mut slopes, s0..so, (so - s0 - 1) / 2, &mut |a: &SlopeRat, b: &SlopeRat| a.cmp(b));
                meds.push((m, ci));
            }
        }
        meds.sort_by(|a, b| {
            sim.count_comparison();
            b.0.cmp(&a.0)
        });
        let dirs: Vec<SlopeRat> = meds.iter().map(|m| m.0).collect();
        let ext = if dirs.is_empty() {
            Vec::new()
        } else {
            multi_slope_extremes(sim, &coll, 0..total, &dirs).expect("finite median slopes over a nonempty set")
        };

        let mut rules: Vec<Option<(SlopeRat, ExtremeSide)>> = vec![None; colls.len()];
        let mut newly_found = false;
        for (&(m, ci), e) in meds.iter().zip(&ext) {
            let b = bounds2[colls[ci].boundary];
            sim.count_comparison();
            sim.count_comparison();
            if 2 * e.min_x.x < b && b < 2 * e.max_x.x {
                let lo = bounds2.partition_point(|&t| t <= 2 * e.min_x.x);
                let hi = bounds2.partition_point(|&t| t < 2 * e.max_x.x);
                for slot in &mut found[lo..hi] {
                    if slot.is_none() {
                        *slot = Some((e.min_x, e.max_x));
                        newly_found = true;
                    }
                }
            } else if 2 * e.max_x.x < b {
                rules[ci] = Some((m, ExtremeSide::Left));
            } else {
                rules[ci] = Some((m, ExtremeSide::Right));
            }
        }

        let colls_before = if probe.is_some() { colls.clone() } else { Vec::new() };
        let mut next = Vec::with_capacity(colls.len());
        let mut w = 0;
        for (ci, c) in colls.iter().enumerate() {
            if found[c.boundary].is_some() {
                continue;
            }
            let start = w;
            w = ks_prune_round(sim, &mut coll, c.start..c.start + c.len, w, rules[ci]);
            next.push(Collection { boundary: c.boundary, start, len: w - start });
        }
        colls = next;
        if w == total && !newly_found {
            break;
        }
        if let Some(f) = probe.as_mut() {
            let unfound = colls.iter().map(|c| bounds2[c.boundary]).collect();
            let paired = colls_before.iter().map(|c| c.len / 2 * 2).sum();
            f(&RoundProbe { before: total, after: w, paired, members: &coll.peek()[..w], points: &everything, unfound });
        }
    }

    if !colls.is_empty() {
        // explicit hull of what is left
        let total: usize = colls.iter().map(|c| c.len).sum();
        mergesort(sim, &mut coll, 0..total, &mut lex);
        let h = graham_upper_hull(sim, &mut coll, 0..total);
        let mut j = 0;
        for c in &colls {
            let b = bounds2[c.boundary];
            loop {
                assert!(j + 1 < h, "no hull edge crosses boundary {b}/2");
                let r = coll.read(sim, j + 1);
                sim.count_comparison();
                if 2 * r.x > b {
                    break;
                }
                j += 1;
            }
            let (l, r) = (coll.read(sim, j), coll.read(sim, j + 1));
            assert!(2 * l.x < b, "no hull edge crosses boundary {b}/2");
            found[c.boundary] = Some((l, r));
        }
    }
    coll.free(sim);
    slopes.free(sim);
    found
        .into_iter()
        .enumerate()
        .map(|(i, e)| {
            let (left, right) = e.expect("every boundary resolved");
            Bridge { left, right, boundary: i }
        })
        .collect()
}
