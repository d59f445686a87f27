//! Acceptance suite. Runs every criterion at its stated tolerance and prints
//! one PASS/FAIL line each. The process fails if a criterion fails that is
//! not in `EXPECTED_FAILURES`, or if an expected failure starts passing.

use std::collections::{HashSet, VecDeque};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use co_geom::ackermann::{ack, alpha_inv, lambda_inv, SatInt};
use co_geom::adversary::{run_against, Adapter, AdvConfig, Adversary, MaximaAdapter};
use co_geom::cost::{maxima_io_bound, randomized_io_bound, CostParams};
use co_geom::datagen::{generate, InstanceKind, InstanceSpec};
use co_geom::geom::{multi_slope_extremes, slope_extremes_scan, Point, SlopeRat};
use co_geom::hull::{convex_hull, HullConfig};
use co_geom::iosim::{SimArray, Simulator};
use co_geom::maxima::{maxima_det, maxima_rand, MaximaConfig, SeedPolicy};
use co_geom::oracle::{oracle_hull, oracle_maxima};
use co_geom::potential::{game_max_bruteforce, phi, GameBounds, GrowthFn, StatusVector};

/// Fitted constant for the comparison budget
/// `comparisons <= C * N * (log2(H + 2) + 1)` with seed 2. The largest
/// ratio measured over the grid is 2.65; see the README.
const FITTED_C: f64 = 3.0;

/// Criteria that fail at their stated tolerance on this implementation.
/// 4: the deterministic I/O ratio spans about 10x against the model bound,
/// because the bound's inverse-Ackermann term is 0 for H = 2 and 2 for
/// larger H while the measured cost changes far less (see the README).
const EXPECTED_FAILURES: &[usize] = &[4];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn within(limit: Duration, elapsed: Duration) -> (bool, String) {
    (elapsed <= limit, format!("{:.1}s of {}s", elapsed.as_secs_f64(), limit.as_secs()))
}

fn det_policies() -> Vec<SeedPolicy> {
    vec![
        SeedPolicy::ConstantSeed(2),
        SeedPolicy::ConstantSeed(5),
        SeedPolicy::LambdaOfN(1),
        SeedPolicy::LambdaOfN(2),
        SeedPolicy::LambdaOfM(1),
        SeedPolicy::LambdaOfM(2),
    ]
}

fn sqrt_ceil(n: usize) -> usize {
    (n as f64).sqrt().ceil() as usize
}

/// Instances of the correctness grid: every size and output size, with
/// `per_cell` seeds each, odd seeds degenerate.
fn correctness_grid(kind: InstanceKind, per_cell: u64, hs: impl Fn(usize) -> Vec<usize>) -> Vec<InstanceSpec> {
    let mut out = Vec::new();
    for e in 8..=14 {
        let n = 1usize << e;
        for h in hs(n) {
            for seed in 0..per_cell {
                let mut spec = InstanceSpec::new(kind, n, h, 1000 * e as u64 + seed);
                spec.degenerate = seed % 2 == 1;
                out.push(spec);
            }
        }
    }
    out
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let params = CostParams::new(1 << 12, 1 << 6).unwrap();
    let grid = correctness_grid(InstanceKind::Maxima, 36, |n| vec![1, 2, sqrt_ceil(n), n]);
    let failures: Vec<String> = grid
        .par_iter()
        .flat_map_iter(|spec| {
            let pts = generate(spec).expect("feasible instance");
            let want = oracle_maxima(&pts);
            let mut bad = Vec::new();
            for policy in det_policies() {
                let got = maxima_det(&pts, &MaximaConfig::new(policy), params).unwrap().maxima;
                if got != want {
                    bad.push(format!("{} {policy}", spec.header()));
                }
            }
            for seed in 0..8 {
                if maxima_rand(&pts, seed, params).unwrap().maxima != want {
                    bad.push(format!("{} randomized:{seed}", spec.header()));
                }
            }
            bad
        })
        .collect();
    let runs = grid.len() * (det_policies().len() + 8);
    let (fast, time) = within(Duration::from_secs(120), start.elapsed());
    let ok = failures.is_empty() && grid.len() >= 1000;
    let mut detail = format!("{} instances, {runs} runs, {} mismatches, {time}", grid.len(), failures.len());
    if let Some(f) = failures.first() {
        detail += &format!("; first: {f}");
    }
    outcome(ok && fast, detail)
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let params = CostParams::new(1 << 12, 1 << 6).unwrap();
    let grid = correctness_grid(InstanceKind::Hull, 48, |n| vec![3, sqrt_ceil(n), n]);
    let policies = [SeedPolicy::ConstantSeed(2), SeedPolicy::LambdaOfN(1), SeedPolicy::LambdaOfM(1)];
    let failures: Vec<String> = grid
        .par_iter()
        .flat_map_iter(|spec| {
            let pts = generate(spec).expect("feasible instance");
            let want = oracle_hull(&pts);
            // the randomized run cycles through 8 rng seeds within each cell
            let mut configs: Vec<HullConfig> = policies.iter().map(|&p| MaximaConfig::new(p)).collect();
            configs.push(HullConfig { policy: SeedPolicy::Randomized, rng_seed: spec.rng_seed % 8 });
            configs
                .into_iter()
                .filter(|cfg| convex_hull(&pts, cfg, params).unwrap().vertices != want)
                .map(|cfg| format!("{} {} rng={}", spec.header(), cfg.policy, cfg.rng_seed))
                .collect::<Vec<_>>()
        })
        .collect();
    let runs = grid.len() * (policies.len() + 1);
    let degenerate = grid.iter().filter(|s| s.degenerate).count();
    let (fast, time) = within(Duration::from_secs(180), start.elapsed());
    let mut detail = format!(
        "{} instances ({degenerate} with collinear and duplicate points), {runs} runs, {} mismatches, {time}",
        grid.len(),
        failures.len()
    );
    if let Some(f) = failures.first() {
        detail += &format!("; first: {f}");
    }
    outcome(failures.is_empty() && grid.len() >= 1000 && fast, detail)
}

/// `(N, H)` cells of the scaling grid.
fn scaling_grid() -> Vec<(usize, usize)> {
    (12..=17).flat_map(|e| {
        let n = 1usize << e;
        [2, 16, 256, sqrt_ceil(n)].map(|h| (n, h))
    })
    .collect()
}

fn spread(v: &[f64]) -> (f64, f64, f64) {
    let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = v.iter().copied().fold(0.0, f64::max);
    (lo, hi, hi / lo)
}

fn scaling_instance(n: usize, h: usize) -> Vec<Point> {
    generate(&InstanceSpec::new(InstanceKind::Maxima, n, h, 1)).expect("feasible instance")
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let params = CostParams::new(1 << 16, 1 << 8).unwrap();
    let cfg = MaximaConfig::new(SeedPolicy::ConstantSeed(2));
    let ratios: Vec<f64> = scaling_grid()
        .par_iter()
        .map(|&(n, h)| {
            let r = maxima_det(&scaling_instance(n, h), &cfg, params).unwrap();
            assert_eq!(r.output_size(), h);
            r.report.comparisons as f64 / (n as f64 * (((h + 2) as f64).log2() + 1.0))
        })
        .collect();
    let (lo, hi, s) = spread(&ratios);
    let (fast, time) = within(Duration::from_secs(300), start.elapsed());
    outcome(
        s <= 4.0 && hi <= FITTED_C && fast,
        format!("ratio {lo:.3}..{hi:.3}, max/min {s:.3} (limit 4), max vs fitted C={FITTED_C}, {time}"),
    )
}

fn criterion_4() -> Outcome {
    let params = CostParams::new(1 << 16, 1 << 8).unwrap();
    let cfg = MaximaConfig::new(SeedPolicy::ConstantSeed(2));
    let rows: Vec<(f64, f64)> = scaling_grid()
        .par_iter()
        .map(|&(n, h)| {
            let pts = scaling_instance(n, h);
            let det = maxima_det(&pts, &cfg, params).unwrap();
            let det_ratio = det.report.io_count as f64 / maxima_io_bound(n as u64, h as u64, det.h0, &params);
            let mean = (0..32u64).map(|s| maxima_rand(&pts, s, params).unwrap().report.io_count as f64).sum::<f64>() / 32.0;
            (det_ratio, mean / randomized_io_bound(n as u64, h as u64, &params))
        })
        .collect();
    let det: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let rand: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let (dlo, dhi, ds) = spread(&det);
    let (rlo, rhi, rs) = spread(&rand);
    outcome(
        ds <= 8.0 && rs <= 8.0,
        format!(
            "deterministic ratio {dlo:.2}..{dhi:.2} max/min {ds:.2} ({}); randomized mean-of-32 ratio {rlo:.2}..{rhi:.2} max/min {rs:.2} ({}); limit 8",
            if ds <= 8.0 { "pass" } else { "fail" },
            if rs <= 8.0 { "pass" } else { "fail" },
        ),
    )
}

/// Plain LRU over block ids: front is most recent.
struct RefLru {
    cap: usize,
    q: VecDeque<u64>,
    misses: u64,
}

impl RefLru {
    fn access(&mut self, b: u64) {
        if let Some(i) = self.q.iter().position(|&x| x == b) {
            self.q.remove(i);
        } else {
            self.misses += 1;
            if self.q.len() == self.cap {
                self.q.pop_back();
            }
        }
        self.q.push_front(b);
    }
}

fn criterion_5() -> Outcome {
    let mut scan_bad = Vec::new();
    for b in [8u64, 64, 256] {
        let params = CostParams::new(16 * b, b).unwrap();
        for n in 1..=4096usize {
            let mut sim = Simulator::new(params);
            let arr = SimArray::from_vec(&mut sim, vec![Point::new(0, 0); n]);
            for i in 0..n {
                arr.read(&mut sim, i);
            }
            let want = (2 * n as u64).div_ceil(b);
            if sim.snapshot().io_count != want {
                scan_bad.push(format!("N={n} B={b}: {} != {want}", sim.snapshot().io_count));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut lru_bad = Vec::new();
    for trace in 0..12 {
        let b = [8u64, 64, 256][trace % 3];
        let lines = [2u64, 7, 32, 100][trace % 4];
        let params = CostParams::new(lines * b, b).unwrap();
        let mut sim = Simulator::new(params);
        let mut reference = RefLru { cap: lines as usize, q: VecDeque::new(), misses: 0 };
        let span = lines * 3 * b;
        let mut addr = 0u64;
        for _ in 0..100_000 {
            // mix sequential runs with random jumps
            addr = if rng.random_bool(0.7) { (addr + rng.random_range(0..b)) % span } else { rng.random_range(0..span) };
            let words = rng.random_range(1..=3).min(span - addr);
            sim.touch(addr, words);
            for blk in addr / b..=(addr + words - 1) / b {
                reference.access(blk);
            }
        }
        if sim.snapshot().io_count != reference.misses {
            lru_bad.push(format!("trace {trace}: {} != {}", sim.snapshot().io_count, reference.misses));
        }
    }
    outcome(
        scan_bad.is_empty() && lru_bad.is_empty(),
        format!(
            "{} scan sizes exact except {}; 12 random traces of 1e5 steps, {} disagree with the reference LRU",
            3 * 4096,
            scan_bad.len(),
            lru_bad.len()
        ),
    )
}

fn probe_values() -> Vec<u64> {
    let mut xs: Vec<u64> = (1..=5000).collect();
    for k in 1..40 {
        let p = 1u64 << k;
        xs.extend([p - 1, p, p + 1]);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    xs.extend((0..5000).map(|_| rng.random_range(1..1u64 << 40)));
    xs.sort_unstable();
    xs.dedup();
    xs
}

/// Every way to place at most `total` nodes into `classes` potentials.
fn node_counts(total: u64, classes: usize) -> Vec<Vec<u64>> {
    if classes == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for t in 0..=total {
        for mut rest in node_counts(total - t, classes - 1) {
            rest.insert(0, t);
            out.push(rest);
        }
    }
    out
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let limit = SatInt::new(1 << 40);
    let xs = probe_values();
    let mut checked = 0u64;
    let mut bad: Vec<String> = Vec::new();

    for level in 0..=6u32 {
        for &x in &xs {
            let l = lambda_inv(level, x);
            checked += 1;
            if ack(level, SatInt::new(l)) < SatInt::new(x) || (l > 0 && ack(level, SatInt::new(l - 1)) >= SatInt::new(x)) {
                bad.push(format!("lambda_inv({level}, {x}) = {l}"));
            }
        }
    }
    for n in 1..=64u64 {
        for &x in &xs {
            let a = alpha_inv(n, x);
            checked += 1;
            if ack(a, SatInt::new(n)) < SatInt::new(x) || (a > 0 && ack(a - 1, SatInt::new(n)) >= SatInt::new(x)) {
                bad.push(format!("alpha_inv({n}, {x}) = {a}"));
            }
        }
    }

    // potential bound for a single top node, and the unit-potential identity
    let mut lemma = 0u64;
    for s in 0..=4u32 {
        let a = GrowthFn::Ack(s + 1);
        for h in 1..=64u64 {
            for kappa in 1..=6u32 {
                let lhs = phi(&StatusVector::new(h, &[(1, kappa)]), &a);
                let rhs = ack(s + 2 * kappa - 1, SatInt::new(h));
                if lhs.is_inf() && rhs.is_inf() {
                    continue;
                }
                lemma += 1;
                if lhs > rhs {
                    bad.push(format!("phi({h}; (1,{kappa})) = {lhs} > A_{}({h}) = {rhs} for s={s}", s + 2 * kappa - 1));
                }
            }
            for t in 0..=64u64 {
                let mut want = SatInt::new(h);
                for _ in 0..t {
                    want = ack(s + 1, want);
                }
                if want > limit {
                    break;
                }
                lemma += 1;
                let got = phi(&StatusVector::new(h, &[(t, 1)]), &a);
                if got != want {
                    bad.push(format!("phi({h}; ({t},1)) = {got}, iterate gives {want} for s={s}"));
                }
            }
        }
    }

    // potential against the exhaustive game, for every vector whose potential
    // is small enough for the search; a game value above the potential shows
    // up as an explosion past `max_value` and counts as a failure
    const GAME_CAP: u64 = 1 << 10;
    let mut games = 0u64;
    let mut skipped = 0u64;
    let bounds = GameBounds { max_states: 5_000_000, max_value: 4 * GAME_CAP };
    for growth in [GrowthFn::Add(1), GrowthFn::Add(2), GrowthFn::Scale(2)] {
        for h in 1..=8u64 {
            for counts in node_counts(6, 4) {
                let seq: Vec<(u64, u32)> = counts.iter().enumerate().map(|(k, &t)| (t, k as u32 + 1)).collect();
                let v = StatusVector::new(h, &seq);
                let p = phi(&v, &growth);
                if p > SatInt::new(GAME_CAP) {
                    skipped += 1;
                    continue;
                }
                games += 1;
                match game_max_bruteforce(&v, &growth, bounds) {
                    Ok(g) if SatInt::new(g) == p => {}
                    Ok(g) => bad.push(format!("{growth:?} {v:?}: phi {p} game {g}")),
                    Err(e) => bad.push(format!("{growth:?} {v:?}: phi {p}, game search {e}")),
                }
            }
        }
    }
    let (fast, time) = within(Duration::from_secs(60), start.elapsed());
    let mut detail = format!(
        "{checked} inverse checks, {lemma} potential checks, {games} game comparisons (all vectors with <= 6 nodes, h <= 8, kappa <= 4, phi <= 1024; {skipped} larger ones skipped), {} failures, {time}",
        bad.len()
    );
    if let Some(b) = bad.first() {
        detail += &format!("; first: {b}");
    }
    outcome(bad.is_empty() && fast, detail)
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let mut cases = 0;
    let mut bad = Vec::new();
    for n in [64usize, 256, 1024] {
        for dfn in ["x+1", "2x"] {
            for zeta in 1..=3u32 {
                cases += 1;
                let cfg = AdvConfig::new(n, zeta, dfn.parse().unwrap());
                let tag = format!("N={n} d={dfn} zeta={zeta}");
                let report = match run_against(cfg.clone(), &mut MaximaAdapter::default()) {
                    Ok(r) => r,
                    Err(e) => {
                        bad.push(format!("{tag}: {e}"));
                        continue;
                    }
                };
                if !report.violations.is_empty() {
                    bad.push(format!("{tag}: {}", report.violations.join("; ")));
                }
                for ep in &report.epochs {
                    let expect = ep.h_before.add(SatInt::new(ep.d).pow2()).saturating_sub(SatInt::ONE);
                    if ep.h_after != expect {
                        bad.push(format!("{tag}: epoch {} -> {} with d={}", ep.h_before, ep.h_after, ep.d));
                    }
                }
                if !report.correct {
                    bad.push(format!("{tag}: wrong answer"));
                }
                // independent replay: the announced ids are the oracle maxima
                let mut adv = Adversary::new(cfg).unwrap();
                let announced = MaximaAdapter::default().run(&mut adv).unwrap();
                let mat = adv.materialize().unwrap();
                let want: HashSet<Point> = oracle_maxima(&mat.points).into_iter().collect();
                let got: HashSet<Point> = announced.iter().map(|&p| mat.points[p as usize]).collect();
                if got != want || got.len() != announced.len() {
                    bad.push(format!("{tag}: announced set differs from oracle maxima after replay"));
                }
            }
        }
    }
    let (fast, time) = within(Duration::from_secs(120), start.elapsed());
    let mut detail = format!("{cases} configurations, {} problems, {time}", bad.len());
    if let Some(b) = bad.first() {
        detail += &format!("; first: {b}");
    }
    outcome(bad.is_empty() && fast, detail)
}

fn extremes_agree(sim: &mut Simulator, pts: &[Point], slopes: &[SlopeRat]) -> bool {
    let arr = SimArray::from_vec(sim, pts.to_vec());
    let fast = multi_slope_extremes(sim, &arr, 0..pts.len(), slopes).unwrap();
    let ok = slopes
        .iter()
        .zip(&fast)
        .all(|(&s, f)| slope_extremes_scan(sim, &arr, 0..pts.len(), s).unwrap() == *f);
    arr.free(sim);
    ok
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let params = CostParams::new(1 << 12, 1 << 6).unwrap();
    let grid: Vec<Point> = (0..5).flat_map(|x| (0..5).map(move |y| Point::new(x, y))).collect();
    let pool: Vec<SlopeRat> = [(2, 1), (1, 1), (1, 2), (0, 1), (-1, 2), (-1, 1), (-2, 1)]
        .iter()
        .map(|&(dy, dx)| SlopeRat::new(dy, dx))
        .collect();
    let mut slope_sets: Vec<Vec<SlopeRat>> = Vec::new();
    for i in 0..pool.len() {
        slope_sets.push(vec![pool[i]]);
        for j in i + 1..pool.len() {
            slope_sets.push(vec![pool[i], pool[j]]);
            for k in j + 1..pool.len() {
                slope_sets.push(vec![pool[i], pool[j], pool[k]]);
            }
        }
    }

    // every subset of the grid with 1..=6 points, split by its first element
    let (sets, bad): (u64, u64) = (0..grid.len())
        .into_par_iter()
        .map(|first| {
            let mut sim = Simulator::new(params);
            let mut cur = vec![grid[first]];
            let (mut sets, mut bad) = (0u64, 0u64);
            fn rec(
                sim: &mut Simulator,
                grid: &[Point],
                next: usize,
                cur: &mut Vec<Point>,
                slope_sets: &[Vec<SlopeRat>],
                sets: &mut u64,
                bad: &mut u64,
            ) {
                *sets += 1;
                for s in slope_sets {
                    if !extremes_agree(sim, cur, s) {
                        *bad += 1;
                    }
                }
                if cur.len() == 6 {
                    return;
                }
                for i in next..grid.len() {
                    cur.push(grid[i]);
                    rec(sim, grid, i + 1, cur, slope_sets, sets, bad);
                    cur.pop();
                }
            }
            rec(&mut sim, &grid, first + 1, &mut cur, &slope_sets, &mut sets, &mut bad);
            (sets, bad)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));

    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut random_bad = 0;
    let mut sim = Simulator::new(params);
    for _ in 0..1000 {
        let n = rng.random_range(7..400);
        let r = rng.random_range(3..200);
        let pts: Vec<Point> = (0..n).map(|_| Point::new(rng.random_range(-r..=r), rng.random_range(-r..=r))).collect();
        let k = rng.random_range(1..24);
        let mut slopes: Vec<SlopeRat> = (0..k).map(|_| SlopeRat::new(rng.random_range(-12..=12), rng.random_range(1..=6))).collect();
        slopes.sort_by(|a, b| b.cmp(a));
        if !extremes_agree(&mut sim, &pts, &slopes) {
            random_bad += 1;
        }
    }
    let time = format!("{:.1}s", start.elapsed().as_secs_f64());
    outcome(
        bad == 0 && random_bad == 0,
        format!(
            "{sets} grid subsets x {} slope sets, {bad} disagreements; 1000 random cases, {random_bad} disagreements, {time}",
            slope_sets.len()
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("maxima correctness", criterion_1),
        ("hull correctness", criterion_2),
        ("comparison scaling", criterion_3),
        ("I/O scaling", criterion_4),
        ("simulator exactness", criterion_5),
        ("Ackermann and potential", criterion_6),
        ("adversary", criterion_7),
        ("multi-slope extremes", criterion_8),
    ];
    let only: Option<usize> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|v| v.parse().ok());
    let mut unexpected = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let id = i + 1;
        if only.is_some_and(|k| k != id) {
            continue;
        }
        // the exhaustive game search recurses once per move
        let o = std::thread::Builder::new().stack_size(1 << 30).spawn(*run).unwrap().join().unwrap();
        let expected = EXPECTED_FAILURES.contains(&id);
        let note = match (o.pass, expected) {
            (false, true) => " [expected failure]",
            (true, true) => " [expected to fail, now passes: update EXPECTED_FAILURES]",
            _ => "",
        };
        if o.pass == expected {
            unexpected += 1;
        }
        println!("criterion {id} {name}: {}{note} ({})", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    if unexpected > 0 {
        println!("{unexpected} criteria differ from the expected outcome");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
