//! Instances with a prescribed output size, verified against the oracles.

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{orient, Point};
use crate::oracle::{oracle_hull, oracle_maxima};

/// Identifier of the generator behind every seeded instance.
pub const RNG_ALGORITHM: &str = "chacha8";

/// Coordinate half-range of maxima instances.
const MAXIMA_RANGE: i64 = 1 << 20;
/// Half-width of the hull lens; its height is `HULL_RADIUS^2`.
const HULL_RADIUS: i64 = 1 << 13;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
pub enum InstanceKind {
    Maxima,
    Hull,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct InstanceSpec {
    pub n: usize,
    pub h: usize,
    pub kind: InstanceKind,
    pub rng_seed: u64,
    pub shuffle: bool,
    /// Mix duplicate points and, for hulls, points on hull edges into the
    /// filler.
    pub degenerate: bool,
}

impl InstanceSpec {
    pub fn new(kind: InstanceKind, n: usize, h: usize, rng_seed: u64) -> Self {
        InstanceSpec { n, h, kind, rng_seed, shuffle: true, degenerate: false }
    }

    pub fn header(&self) -> String {
        format!(
            "kind={:?} n={} h={} seed={} rng={} shuffle={} degenerate={}",
            self.kind, self.n, self.h, self.rng_seed, RNG_ALGORITHM, self.shuffle, self.degenerate
        )
    }
}

pub fn generate(spec: &InstanceSpec) -> Result<Vec<Point>> {
    match spec.kind {
        InstanceKind::Maxima => gen_maxima_instance(spec),
        InstanceKind::Hull => gen_hull_instance(spec),
    }
}

fn check_sizes(spec: &InstanceSpec, min_h: usize, max_h: usize) -> Result<()> {
    if spec.h < min_h || spec.h > spec.n {
        return Err(Error::Infeasible(format!("need {min_h} <= H <= N, got H={} N={}", spec.h, spec.n)));
    }
    if spec.h > max_h {
        return Err(Error::Infeasible(format!("H={} exceeds the coordinate budget ({max_h})", spec.h)));
    }
    Ok(())
}

fn sorted_distinct(rng: &mut ChaCha8Rng, lo: i64, len: usize, count: usize) -> Vec<i64> {
    let mut v: Vec<i64> = index::sample(rng, len, count).into_iter().map(|i| lo + i as i64).collect();
    v.sort_unstable();
    v
}

/// A staircase of `H` points plus filler, each filler point strictly
/// dominated by a staircase point.
pub fn gen_maxima_instance(spec: &InstanceSpec) -> Result<Vec<Point>> {
    let width = 2 * MAXIMA_RANGE as usize;
    check_sizes(spec, 1, width)?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.rng_seed);
    let lo = -MAXIMA_RANGE + 1;
    let xs = sorted_distinct(&mut rng, lo, width, spec.h);
    let mut ys = sorted_distinct(&mut rng, lo, width, spec.h);
    ys.reverse();
    let stair: Vec<Point> = xs.into_iter().zip(ys).map(|(x, y)| Point::new(x, y)).collect();

    let mut pts = stair.clone();
    while pts.len() < spec.n {
        if spec.degenerate && rng.random_ratio(1, 8) {
            let q = pts[rng.random_range(0..pts.len())];
            pts.push(q);
            continue;
        }
        let s = stair[rng.random_range(0..stair.len())];
        let q = Point::new(rng.random_range(-MAXIMA_RANGE..=s.x), rng.random_range(-MAXIMA_RANGE..=s.y));
        if q != s {
            pts.push(q);
        }
    }
    if spec.shuffle {
        pts.shuffle(&mut rng);
    }
    let got = oracle_maxima(&pts).len();
    if got != spec.h {
        return Err(Error::Infeasible(format!("generated maxima instance has H={got}, wanted {}", spec.h)));
    }
    Ok(pts)
}

/// The boundary lattice points of the lens `x^2 - C <= y <= C - x^2`,
/// counter-clockwise from `(-R, 0)`; indices `0..4R`.
fn lens_vertex(i: i64) -> Point {
    let (r, c) = (HULL_RADIUS, HULL_RADIUS * HULL_RADIUS);
    if i < 2 * r {
        // lower arc, left to right, starting at the left corner
        let x = -r + i;
        Point::new(x, x * x - c)
    } else {
        // upper arc, right to left, starting at the right corner
        let x = r - (i - 2 * r);
        Point::new(x, c - x * x)
    }
}

/// `p` strictly inside the convex polygon `v` (counter-clockwise, >= 3).
fn strictly_inside(v: &[Point], p: Point) -> bool {
    let n = v.len();
    if orient(v[0], v[1], p) <= 0 || orient(v[0], v[n - 1], p) >= 0 {
        return false;
    }
    // largest i in [1, n-2] with p on or left of v0 -> vi
    let (mut lo, mut hi) = (1, n - 2);
    while lo < hi {
        let mid = (lo + hi).div_ceil(2);
        if orient(v[0], v[mid], p) >= 0 {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    orient(v[lo], v[lo + 1], p) > 0
}

/// `H` vertices on a lens in strictly convex position plus strictly
/// interior filler (random convex combinations of three vertices).
pub fn gen_hull_instance(spec: &InstanceSpec) -> Result<Vec<Point>> {
    let slots = 4 * HULL_RADIUS;
    check_sizes(spec, 3, slots as usize)?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.rng_seed);
    // one vertex per stratum keeps small polygons fat
    let h = spec.h as i64;
    let verts: Vec<Point> = (0..h)
        .map(|j| {
            let (a, b) = (j * slots / h, (j + 1) * slots / h);
            lens_vertex(rng.random_range(a..b))
        })
        .collect();

    let mut pts = verts.clone();
    let mut attempts = 0u64;
    while pts.len() < spec.n {
        attempts += 1;
        if attempts > 64 * spec.n as u64 + 1024 {
            return Err(Error::Infeasible("could not place interior points".into()));
        }
        if spec.degenerate && rng.random_ratio(1, 4) {
            if rng.random_bool(0.5) {
                let q = pts[rng.random_range(0..pts.len())];
                pts.push(q);
            } else if let Some(q) = edge_point(&mut rng, &verts) {
                pts.push(q);
            }
            continue;
        }
        let w: [i128; 3] = [rng.random_range(1..1 << 20), rng.random_range(1..1 << 20), rng.random_range(1..1 << 20)];
        let tri = [0; 3].map(|_| verts[rng.random_range(0..verts.len())]);
        let total: i128 = w.iter().sum();
        let mix = |f: fn(&Point) -> i64| -> i64 {
            let s: i128 = (0..3).map(|i| w[i] * f(&tri[i]) as i128).sum();
            (s as f64 / total as f64).round() as i64
        };
        let q = Point::new(mix(|p| p.x), mix(|p| p.y));
        if strictly_inside(&verts, q) {
            pts.push(q);
        }
    }
    if spec.shuffle {
        pts.shuffle(&mut rng);
    }
    let got = oracle_hull(&pts).len();
    if got != spec.h {
        return Err(Error::Infeasible(format!("generated hull instance has H={got}, wanted {}", spec.h)));
    }
    Ok(pts)
}

/// A lattice point strictly inside some hull edge, if the drawn edge has one.
fn edge_point(rng: &mut ChaCha8Rng, verts: &[Point]) -> Option<Point> {
    let i = rng.random_range(0..verts.len());
    let (a, b) = (verts[i], verts[(i + 1) % verts.len()]);
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let g = gcd(dx.unsigned_abs(), dy.unsigned_abs()) as i64;
    (g > 1).then(|| {
        let t = rng.random_range(1..g);
        Point::new(a.x + t * dx / g, a.y + t * dy / g)
    })
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}
