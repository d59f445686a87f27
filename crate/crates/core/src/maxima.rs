//! Seeded output-sensitive planar maxima and its randomized variant.

use std::cmp::Ordering;
use std::ops::Range;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::ackermann::lambda_inv;
use crate::cost::CostParams;
use crate::error::{Error, Result};
use crate::geom::{distribute, BucketLayout, Point};
use crate::iosim::{CostReport, Element, SimArray, Simulator};

/// Answers coordinate comparisons between opaque point handles.
pub trait PointOracle {
    type P: Element;
    fn cmp_x(&mut self, a: &Self::P, b: &Self::P) -> Ordering;
    fn cmp_y(&mut self, a: &Self::P, b: &Self::P) -> Ordering;

    /// Lexicographic `(x, y)`.
    fn cmp_key(&mut self, a: &Self::P, b: &Self::P) -> Ordering {
        match self.cmp_x(a, b) {
            Ordering::Equal => self.cmp_y(a, b),
            o => o,
        }
    }
}

/// Plain integer coordinates.
#[derive(Clone, Copy, Debug, Default)]
pub struct Coords;

impl PointOracle for Coords {
    type P = Point;

    fn cmp_x(&mut self, a: &Point, b: &Point) -> Ordering {
        a.x.cmp(&b.x)
    }

    fn cmp_y(&mut self, a: &Point, b: &Point) -> Ordering {
        a.y.cmp(&b.y)
    }
}

/// `q` dominates `p`: at least as large in both coordinates and different.
pub fn dominates(q: &Point, p: &Point) -> bool {
    q.x >= p.x && q.y >= p.y && q != p
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SeedPolicy {
    ConstantSeed(u64),
    LambdaOfN(u32),
    LambdaOfM(u32),
    Randomized,
}

impl SeedPolicy {
    pub fn name(&self) -> &'static str {
        match self {
            SeedPolicy::ConstantSeed(_) => "constant",
            SeedPolicy::LambdaOfN(_) => "lambda_n",
            SeedPolicy::LambdaOfM(_) => "lambda_m",
            SeedPolicy::Randomized => "randomized",
        }
    }

    /// The policy parameter `s` (2 for the randomized variant).
    pub fn s(&self) -> u64 {
        match *self {
            SeedPolicy::ConstantSeed(s) => s,
            SeedPolicy::LambdaOfN(s) | SeedPolicy::LambdaOfM(s) => s as u64,
            SeedPolicy::Randomized => 2,
        }
    }
}

impl std::str::FromStr for SeedPolicy {
    type Err = Error;

    /// `constant:S`, `lambda-n:S`, `lambda-m:S` or `randomized`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParams(format!("unrecognised seed policy `{s}`"));
        if s == "randomized" {
            return Ok(SeedPolicy::Randomized);
        }
        let (name, arg) = s.split_once(':').ok_or_else(bad)?;
        let v: u64 = arg.parse().map_err(|_| bad())?;
        match name {
            "constant" if v >= 1 => Ok(SeedPolicy::ConstantSeed(v)),
            "lambda-n" => Ok(SeedPolicy::LambdaOfN(v as u32)),
            "lambda-m" => Ok(SeedPolicy::LambdaOfM(v as u32)),
            _ => Err(bad()),
        }
    }
}

impl std::fmt::Display for SeedPolicy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SeedPolicy::ConstantSeed(s) => write!(f, "constant:{s}"),
            SeedPolicy::LambdaOfN(s) => write!(f, "lambda-n:{s}"),
            SeedPolicy::LambdaOfM(s) => write!(f, "lambda-m:{s}"),
            SeedPolicy::Randomized => f.write_str("randomized"),
        }
    }
}

/// Starting seed `h0` for an input of `n` points, never below 1.
pub fn initial_seed(policy: SeedPolicy, n: u64, params: &CostParams) -> u64 {
    let h = match policy {
        SeedPolicy::ConstantSeed(s) => s,
        SeedPolicy::LambdaOfN(s) => lambda_inv(s, n.max(1)),
        SeedPolicy::LambdaOfM(s) => lambda_inv(s, params.lines()),
        SeedPolicy::Randomized => 2,
    };
    h.max(1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MaximaConfig {
    pub policy: SeedPolicy,
    pub rng_seed: u64,
}

impl MaximaConfig {
    pub fn new(policy: SeedPolicy) -> Self {
        MaximaConfig { policy, rng_seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaximaResult {
    /// Decreasing x.
    pub maxima: Vec<Point>,
    pub h0: u64,
    pub report: CostReport,
}

impl MaximaResult {
    /// Output size `H`.
    pub fn output_size(&self) -> usize {
        self.maxima.len()
    }
}

/// One recursive call as seen from the outside: its seed and the number of
/// maxima emitted before it started.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CallTrace {
    pub h: u64,
    pub emitted_before: u64,
}

/// Knobs and probes for [`maxima_with`].
pub struct MaximaOpts<'a, P> {
    pub h0: u64,
    /// `Some` selects the randomized order reversal.
    pub rng: Option<ChaCha8Rng>,
    pub trace: Option<Vec<CallTrace>>,
    pub on_prune: Option<&'a mut dyn FnMut(&P)>,
}

impl<P> MaximaOpts<'_, P> {
    pub fn new(h0: u64) -> Self {
        MaximaOpts { h0, rng: None, trace: None, on_prune: None }
    }
}

/// Removes, bucket by bucket from bucket 0 on, every point whose y does not
/// exceed the largest y seen in earlier buckets. Bucket 0 must hold the
/// largest `(x, y)` keys. Survivors are compacted to the front of their
/// bucket; their ranges are returned.
pub fn prune_buckets<'f, O: PointOracle>(
    sim: &mut Simulator,
    oracle: &mut O,
    arr: &mut SimArray<O::P>,
    layout: &BucketLayout,
    mut on_prune: Option<&mut (dyn FnMut(&O::P) + 'f)>,
) -> Vec<Range<usize>> {
    let mut ymax: Option<O::P> = None;
    let mut out = Vec::with_capacity(layout.k());
    for b in 0..layout.k() {
        let r = layout.bucket(b);
        let mut w = r.start;
        let mut bmax: Option<O::P> = None;
        for i in r {
            let p = arr.read(sim, i);
            if let Some(m) = ymax {
                sim.count_comparison();
                if oracle.cmp_y(&p, &m) != Ordering::Greater {
                    if let Some(f) = on_prune.as_mut() {
                        f(&p);
                    }
                    continue;
                }
            }
            let higher = match bmax {
                None => true,
                Some(m) => {
                    sim.count_comparison();
                    oracle.cmp_y(&p, &m) == Ordering::Greater
                }
            };
            if higher {
                bmax = Some(p);
            }
            if w != i {
                arr.write(sim, w, p);
            }
            w += 1;
        }
        if bmax.is_some() {
            ymax = bmax;
        }
        out.push(layout.offsets[b]..w);
    }
    out
}

struct Run<'o, 'a, O: PointOracle> {
    oracle: &'o mut O,
    opts: MaximaOpts<'a, O::P>,
    out: SimArray<O::P>,
    emitted: usize,
}

impl<O: PointOracle> Run<'_, '_, O> {
    fn emit(&mut self, sim: &mut Simulator, p: O::P) {
        self.out.write(sim, self.emitted, p);
        self.emitted += 1;
    }

    fn solve(&mut self, sim: &mut Simulator, arr: &mut SimArray<O::P>, range: Range<usize>, h: u64) {
        if let Some(t) = self.opts.trace.as_mut() {
            t.push(CallTrace { h, emitted_before: self.emitted as u64 });
        }
        let n = range.len();
        if n == 0 {
            return;
        }
        if n == 1 {
            let p = arr.read(sim, range.start);
            self.emit(sim, p);
            return;
        }
        let k = (2 * h).min(n as u64) as usize;
        let oracle = &mut *self.oracle;
        let layout = distribute(sim, arr, range, k, &mut |a: &O::P, b: &O::P| oracle.cmp_key(b, a));
        let mut parts = prune_buckets(sim, self.oracle, arr, &layout, self.opts.on_prune.as_deref_mut());
        if let Some(rng) = self.opts.rng.as_mut() {
            if rng.random_bool(0.5) {
                parts.reverse();
            }
        }
        let start = self.emitted as u64;
        for part in parts {
            let found = self.emitted as u64 - start;
            self.solve(sim, arr, part, h + found);
        }
    }
}

/// Runs the seeded maxima recursion over `items`, consuming them. Returns
/// the maxima in the order they were emitted.
pub fn maxima_with<'a, O: PointOracle>(
    sim: &mut Simulator,
    oracle: &mut O,
    items: Vec<O::P>,
    opts: MaximaOpts<'a, O::P>,
) -> Result<(Vec<O::P>, MaximaOpts<'a, O::P>)> {
    let Some(&first) = items.first() else {
        return Err(Error::EmptyInput);
    };
    if opts.h0 == 0 {
        return Err(Error::InvalidParams("seed h must be at least 1".into()));
    }
    let n = items.len();
    let mut arr = SimArray::from_vec(sim, items);
    let out = SimArray::alloc(sim, n, first);
    let h0 = opts.h0;
    let mut run = Run { oracle, opts, out, emitted: 0 };
    run.solve(sim, &mut arr, 0..n, h0);
    arr.free(sim);
    let mut res = run.out.into_vec(sim);
    res.truncate(run.emitted);
    Ok((res, run.opts))
}

fn finish(sim: &Simulator, mut maxima: Vec<Point>, h0: u64) -> MaximaResult {
    maxima.sort_by(|a, b| b.cmp(a));
    MaximaResult { maxima, h0, report: sim.snapshot() }
}

/// Deterministic seeded maxima.
pub fn maxima_det(points: &[Point], config: &MaximaConfig, params: CostParams) -> Result<MaximaResult> {
    if config.policy == SeedPolicy::Randomized {
        return maxima_rand(points, config.rng_seed, params);
    }
    let h0 = initial_seed(config.policy, points.len() as u64, &params);
    let mut sim = Simulator::new(params);
    let (maxima, _) = maxima_with(&mut sim, &mut Coords, points.to_vec(), MaximaOpts::new(h0))?;
    Ok(finish(&sim, maxima, h0))
}

/// Randomized variant: seed 2, and each call reverses its bucket order
/// with probability one half.
pub fn maxima_rand(points: &[Point], rng_seed: u64, params: CostParams) -> Result<MaximaResult> {
    let mut sim = Simulator::new(params);
    let opts = MaximaOpts { rng: Some(ChaCha8Rng::seed_from_u64(rng_seed)), ..MaximaOpts::new(2) };
    let (maxima, _) = maxima_with(&mut sim, &mut Coords, points.to_vec(), opts)?;
    Ok(finish(&sim, maxima, 2))
}
