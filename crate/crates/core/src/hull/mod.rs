//! Seeded output-sensitive upper hull by simultaneous bridge finding, and
//! the full convex hull built from two upper hulls.

mod bridge;

use std::ops::Range;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use bridge::{ks_prune_round, multi_bridge, Bridge, ExtremeSide, RoundProbe};

use crate::cost::CostParams;
use crate::error::{Error, Result};
use crate::geom::{distribute, graham_upper_hull, lex, mergesort, Point};
use crate::iosim::{CostReport, SimArray, Simulator};
use crate::maxima::{initial_seed, MaximaConfig, SeedPolicy};

pub type HullConfig = MaximaConfig;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HullResult {
    /// Upper chain left to right, or the full hull counter-clockwise.
    pub vertices: Vec<Point>,
    pub h0: u64,
    pub report: CostReport,
}

impl HullResult {
    pub fn output_size(&self) -> usize {
        self.vertices.len()
    }
}

/// Survivors of one bucket after removing everything under its bridges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BucketPrune {
    /// Survivors, compacted to the front of the bucket.
    pub survivors: Range<usize>,
    /// Right end of the left bridge, when it lies in the bucket.
    pub left_vertex: Option<Point>,
    /// Left end of the right bridge, when it lies in the bucket and differs
    /// from `left_vertex`.
    pub right_vertex: Option<Point>,
}

impl BucketPrune {
    /// Bridge endpoints inside the bucket, left to right.
    pub fn confirmed(&self) -> impl Iterator<Item = Point> + '_ {
        self.left_vertex.iter().chain(self.right_vertex.iter()).copied()
    }
}

/// Keeps the points of `bucket` strictly between the right end of the left
/// bridge and the left end of the right bridge. `bounds2` are the doubled
/// boundaries to the left and right of the bucket.
pub fn bridge_prune_bucket(
    sim: &mut Simulator,
    arr: &mut SimArray<Point>,
    bucket: Range<usize>,
    left: Option<&Bridge>,
    right: Option<&Bridge>,
    bounds2: (Option<i64>, Option<i64>),
) -> BucketPrune {
    let left_vertex = left.map(|b| b.right).filter(|v| bounds2.1.is_none_or(|r| 2 * v.x < r));
    let right_vertex = right
        .map(|b| b.left)
        .filter(|v| bounds2.0.is_none_or(|l| 2 * v.x > l) && Some(*v) != left_vertex);
    let lo_x = left.map(|b| b.right.x);
    let hi_x = right.map(|b| b.left.x);
    let start = bucket.start;
    let mut w = start;
    if lo_x.zip(hi_x).is_none_or(|(l, h)| l < h) {
        for i in bucket {
            let q = arr.read(sim, i);
            sim.count_comparison();
            if lo_x.is_none_or(|l| q.x > l) && hi_x.is_none_or(|h| q.x < h) {
                if w != i {
                    arr.write(sim, w, q);
                }
                w += 1;
            }
        }
    }
    BucketPrune { survivors: start..w, left_vertex, right_vertex }
}

struct HullRun<'p> {
    rng: Option<ChaCha8Rng>,
    probe: Option<&'p mut dyn FnMut(&RoundProbe)>,
}

impl HullRun<'_> {
    fn base_case(&mut self, sim: &mut Simulator, arr: &mut SimArray<Point>, range: Range<usize>) -> Vec<Point> {
        let lo = range.start;
        mergesort(sim, arr, range.clone(), &mut lex);
        let h = graham_upper_hull(sim, arr, range);
        (0..h).map(|i| arr.read(sim, lo + i)).collect()
    }

    fn solve(&mut self, sim: &mut Simulator, arr: &mut SimArray<Point>, range: Range<usize>, h: u64) -> Vec<Point> {
        let n = range.len();
        if n == 0 {
            return Vec::new();
        }
        if n <= 3 || h.saturating_mul(h) >= n as u64 {
            return self.base_case(sim, arr, range);
        }
        let k = (2 * h).min(n as u64) as usize;
        let layout = distribute(sim, arr, range, k, &mut lex);
        let slabs = separate_columns(sim, arr, &layout.offsets);
        if slabs.len() == 1 {
            return self.solve(sim, arr, slabs[0].range.clone(), h);
        }
        let buckets: Vec<Range<usize>> = slabs.iter().map(|s| s.range.clone()).collect();
        let bounds2: Vec<i64> = slabs.windows(2).map(|w| w[0].max_x + w[1].min_x).collect();
        let bridges = multi_bridge(sim, arr, &buckets, &bounds2, self.probe.as_deref_mut());

        let mut parts = Vec::with_capacity(buckets.len());
        let mut confirmed_total = 0u64;
        for (i, b) in buckets.iter().enumerate() {
            let left = i.checked_sub(1).map(|j| &bridges[j]);
            let right = bridges.get(i);
            let bounds = (i.checked_sub(1).map(|j| bounds2[j]), bounds2.get(i).copied());
            let pr = bridge_prune_bucket(sim, arr, b.clone(), left, right, bounds);
            confirmed_total += pr.confirmed().count() as u64;
            // sentinels go after the survivors, in the space the bridge
            // endpoints occupied
            let mut end = pr.survivors.end;
            let mut sentinels = (None, None);
            if !pr.survivors.is_empty() {
                if let Some(l) = left {
                    arr.write(sim, end, l.right);
                    end += 1;
                    sentinels.0 = Some(l.right);
                }
                if let Some(r) = right {
                    arr.write(sim, end, r.left);
                    end += 1;
                    sentinels.1 = Some(r.left);
                }
            }
            parts.push((pr.survivors.start..end, pr, sentinels));
        }

        let mut order: Vec<usize> = (0..parts.len()).collect();
        if let Some(rng) = self.rng.as_mut() {
            if rng.random_bool(0.5) {
                order.reverse();
            }
        }
        let mut chains: Vec<Vec<Point>> = vec![Vec::new(); parts.len()];
        let mut emitted = 0u64;
        for i in order {
            let (r, _, (ls, rs)) = &parts[i];
            if r.is_empty() {
                continue;
            }
            let mut chain = self.solve(sim, arr, r.clone(), h + confirmed_total + emitted);
            if let Some(s) = ls {
                assert_eq!(chain.first(), Some(s), "left sentinel must open the child chain");
                chain.remove(0);
            }
            if let Some(s) = rs {
                assert_eq!(chain.last(), Some(s), "right sentinel must close the child chain");
                chain.pop();
            }
            emitted += chain.len() as u64;
            chains[i] = chain;
        }

        let mut out = Vec::new();
        for ((_, pr, _), chain) in parts.iter().zip(chains) {
            out.extend(pr.left_vertex);
            out.extend(chain);
            out.extend(pr.right_vertex);
        }
        out
    }
}

/// A nonempty bucket with its x-extent.
struct Slab {
    range: Range<usize>,
    min_x: i64,
    max_x: i64,
}

/// Drops from each bucket the points of an x-column that continues into a
/// later bucket (they lie below that column's top), then discards empty
/// buckets. Afterwards consecutive buckets have disjoint x-ranges.
fn separate_columns(sim: &mut Simulator, arr: &mut SimArray<Point>, offsets: &[usize]) -> Vec<Slab> {
    let mut out: Vec<Slab> = Vec::new();
    for w in offsets.windows(2).rev() {
        let r = w[0]..w[1];
        if r.is_empty() {
            continue;
        }
        let (mut min_x, mut max_x) = (i64::MAX, i64::MIN);
        for i in r.clone() {
            let q = arr.read(sim, i);
            sim.count_comparison();
            sim.count_comparison();
            min_x = min_x.min(q.x);
            max_x = max_x.max(q.x);
        }
        let mut end = r.end;
        if out.last().is_some_and(|s| s.min_x == max_x) {
            let column = max_x;
            max_x = i64::MIN;
            end = r.start;
            for i in r.clone() {
                let q = arr.read(sim, i);
                sim.count_comparison();
                if q.x != column {
                    if end != i {
                        arr.write(sim, end, q);
                    }
                    end += 1;
                    max_x = max_x.max(q.x);
                }
            }
        }
        if end > r.start {
            out.push(Slab { range: r.start..end, min_x, max_x });
        }
    }
    out.reverse();
    out
}

fn upper_in(sim: &mut Simulator, points: Vec<Point>, h0: u64, run: &mut HullRun) -> Vec<Point> {
    let n = points.len();
    let mut arr = SimArray::from_vec(sim, points);
    let chain = run.solve(sim, &mut arr, 0..n, h0);
    arr.free(sim);
    let mut out = SimArray::alloc(sim, chain.len(), Point::default());
    for (i, &p) in chain.iter().enumerate() {
        out.write(sim, i, p);
    }
    out.into_vec(sim)
}

fn seed_and_rng(config: &HullConfig, n: usize, params: &CostParams) -> (u64, Option<ChaCha8Rng>) {
    match config.policy {
        SeedPolicy::Randomized => (2, Some(ChaCha8Rng::seed_from_u64(config.rng_seed))),
        p => (initial_seed(p, n as u64, params), None),
    }
}

/// Upper hull left to right (topmost point of each x-column only, no
/// collinear vertices), with a probe called after every bridge-finding
/// round.
pub fn upper_hull_probed(
    sim: &mut Simulator,
    points: &[Point],
    config: &HullConfig,
    probe: Option<&mut dyn FnMut(&RoundProbe)>,
) -> Result<(Vec<Point>, u64)> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    let (h0, rng) = seed_and_rng(config, points.len(), sim.params());
    let mut run = HullRun { rng, probe };
    Ok((upper_in(sim, points.to_vec(), h0, &mut run), h0))
}

/// Upper hull left to right.
pub fn upper_hull_sensitive(points: &[Point], config: &HullConfig, params: CostParams) -> Result<HullResult> {
    let mut sim = Simulator::new(params);
    let (vertices, h0) = upper_hull_probed(&mut sim, points, config, None)?;
    Ok(HullResult { vertices, h0, report: sim.snapshot() })
}

/// Full convex hull, counter-clockwise from the lowest leftmost point,
/// without collinear vertices. Built from the upper hulls of the input and
/// of its point reflection.
pub fn convex_hull(points: &[Point], config: &HullConfig, params: CostParams) -> Result<HullResult> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut sim = Simulator::new(params);
    let (h0, rng) = seed_and_rng(config, points.len(), &params);
    let mut run = HullRun { rng, probe: None };
    let upper = upper_in(&mut sim, points.to_vec(), h0, &mut run);
    let lower = upper_in(&mut sim, points.iter().map(|p| p.neg()).collect(), h0, &mut run);

    // lower chain left to right, then the upper chain right to left
    let mut hull: Vec<Point> = Vec::with_capacity(upper.len() + lower.len());
    for p in lower.iter().rev().map(|p| p.neg()).chain(upper.iter().rev().copied()) {
        if hull.last() != Some(&p) {
            hull.push(p);
        }
    }
    if hull.len() > 1 && hull.first() == hull.last() {
        hull.pop();
    }
    Ok(HullResult { vertices: hull, h0, report: sim.snapshot() })
}
