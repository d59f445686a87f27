//! Single runs and parameter sweeps producing one CSV row per run.

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::sync::Mutex;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::cost::{distr_cost, maxima_io_bound, randomized_io_bound, CostParams};
use crate::datagen::{generate, InstanceKind, InstanceSpec, RNG_ALGORITHM};
use crate::error::{Error, Result};
use crate::geom::Point;
use crate::hull::{convex_hull, HullConfig};
use crate::iosim::CostReport;
use crate::maxima::{maxima_det, maxima_rand, MaximaConfig, SeedPolicy};
use crate::oracle::{oracle_hull, oracle_maxima};

/// Environment variable capping the number of sweep worker threads.
pub const THREADS_ENV: &str = "CO_GEOM_THREADS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, clap::ValueEnum)]
pub enum Algorithm {
    /// Deterministic seeded maxima.
    Maxima,
    /// Randomized maxima (seed 2, random bucket order).
    MaximaRand,
    /// Full convex hull.
    Hull,
}

impl Algorithm {
    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Maxima => "maxima",
            Algorithm::MaximaRand => "maxima-rand",
            Algorithm::Hull => "hull",
        }
    }

    /// Instance family the algorithm is exercised on.
    pub fn instance_kind(&self) -> InstanceKind {
        match self {
            Algorithm::Hull => InstanceKind::Hull,
            _ => InstanceKind::Maxima,
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One row of run output. Column order and names are fixed.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunRow {
    pub algorithm: String,
    #[serde(rename = "N")]
    pub n: u64,
    #[serde(rename = "H")]
    pub h: u64,
    pub seed_policy: String,
    pub s: u64,
    pub h0: u64,
    #[serde(rename = "M")]
    pub memory: u64,
    #[serde(rename = "B")]
    pub block: u64,
    pub rng_seed: u64,
    pub rng: String,
    pub io_count: u64,
    pub comparisons: u64,
    pub distinct_blocks: u64,
    pub model_distr_cost: f64,
    pub model_bound: f64,
    pub wall_time_ms: f64,
    pub verified: bool,
    pub status: String,
}

impl RunRow {
    pub const HEADER: [&'static str; 18] = [
        "algorithm",
        "N",
        "H",
        "seed_policy",
        "s",
        "h0",
        "M",
        "B",
        "rng_seed",
        "rng",
        "io_count",
        "comparisons",
        "distinct_blocks",
        "model_distr_cost",
        "model_bound",
        "wall_time_ms",
        "verified",
        "status",
    ];

    fn blank(alg: Algorithm, n: u64, policy: SeedPolicy, params: CostParams, rng_seed: u64) -> Self {
        RunRow {
            algorithm: alg.name().to_string(),
            n,
            h: 0,
            seed_policy: policy.name().to_string(),
            s: policy.s(),
            h0: 0,
            memory: params.memory(),
            block: params.block(),
            rng_seed,
            rng: RNG_ALGORITHM.to_string(),
            io_count: 0,
            comparisons: 0,
            distinct_blocks: 0,
            model_distr_cost: 0.0,
            model_bound: 0.0,
            wall_time_ms: 0.0,
            verified: false,
            status: String::new(),
        }
    }
}

/// What to run and how.
#[derive(Clone, Copy, Debug)]
pub struct RunSpec {
    pub algorithm: Algorithm,
    /// Ignored by `maxima-rand`.
    pub policy: SeedPolicy,
    pub params: CostParams,
    /// Drives the randomized variants.
    pub rng_seed: u64,
    pub verify: bool,
}

/// Output of a run, before it is flattened into a row.
#[derive(Clone, Debug)]
pub struct RunOutput {
    pub points: Vec<Point>,
    pub h0: u64,
    pub report: CostReport,
}

fn execute(points: &[Point], spec: &RunSpec) -> Result<RunOutput> {
    let (points, h0, report) = match spec.algorithm {
        Algorithm::Maxima => {
            let cfg = MaximaConfig { policy: spec.policy, rng_seed: spec.rng_seed };
            let r = maxima_det(points, &cfg, spec.params)?;
            (r.maxima, r.h0, r.report)
        }
        Algorithm::MaximaRand => {
            let r = maxima_rand(points, spec.rng_seed, spec.params)?;
            (r.maxima, r.h0, r.report)
        }
        Algorithm::Hull => {
            let cfg = HullConfig { policy: spec.policy, rng_seed: spec.rng_seed };
            let r = convex_hull(points, &cfg, spec.params)?;
            (r.vertices, r.h0, r.report)
        }
    };
    Ok(RunOutput { points, h0, report })
}

/// Compares an output with the oracle and summarises the difference.
pub fn verify_output(algorithm: Algorithm, input: &[Point], output: &[Point]) -> Result<()> {
    let expected = match algorithm {
        Algorithm::Hull => oracle_hull(input),
        _ => oracle_maxima(input),
    };
    if expected == output {
        return Ok(());
    }
    let missing: Vec<_> = expected.iter().filter(|p| !output.contains(p)).collect();
    let extra: Vec<_> = output.iter().filter(|p| !expected.contains(p)).collect();
    let show = |v: &[&Point]| v.iter().take(5).map(|p| format!("({}, {})", p.x, p.y)).collect::<Vec<_>>().join(" ");
    Err(Error::Verification(format!(
        "expected {} points, got {}; missing [{}]{}; extra [{}]{}",
        expected.len(),
        output.len(),
        show(&missing),
        if missing.len() > 5 { " ..." } else { "" },
        show(&extra),
        if extra.len() > 5 { " ..." } else { "" },
    )))
}

/// Model bound reported next to the measured I/O count.
pub fn model_bound(algorithm: Algorithm, n: u64, h: u64, h0: u64, params: &CostParams) -> f64 {
    match algorithm {
        Algorithm::MaximaRand => randomized_io_bound(n, h, params),
        _ => maxima_io_bound(n, h, h0, params),
    }
}

/// Runs one algorithm on one instance under a fresh simulator.
pub fn run_algorithm(points: &[Point], spec: &RunSpec) -> Result<(RunRow, RunOutput)> {
    let n = points.len() as u64;
    let policy = if spec.algorithm == Algorithm::MaximaRand { SeedPolicy::Randomized } else { spec.policy };
    let mut row = RunRow::blank(spec.algorithm, n, policy, spec.params, spec.rng_seed);
    let start = Instant::now();
    let out = execute(points, spec)?;
    row.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    if spec.verify {
        verify_output(spec.algorithm, points, &out.points)?;
        row.verified = true;
    }
    let h = out.points.len() as u64;
    row.h = h;
    row.h0 = out.h0;
    row.io_count = out.report.io_count;
    row.comparisons = out.report.comparisons;
    row.distinct_blocks = out.report.distinct_blocks;
    row.model_distr_cost = distr_cost(n.max(1), out.h0.max(1), &spec.params);
    row.model_bound = model_bound(spec.algorithm, n, h, out.h0, &spec.params);
    row.status = "ok".into();
    Ok((row, out))
}

/// Output-size column of a sweep grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HSpec {
    Fixed(usize),
    /// `ceil(sqrt(N))`.
    Sqrt,
    /// `N` itself.
    All,
}

impl HSpec {
    pub fn resolve(&self, n: usize) -> usize {
        match *self {
            HSpec::Fixed(h) => h,
            HSpec::Sqrt => (n as f64).sqrt().ceil() as usize,
            HSpec::All => n,
        }
    }
}

impl FromStr for HSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sqrt" => Ok(HSpec::Sqrt),
            "n" | "N" => Ok(HSpec::All),
            _ => s
                .parse()
                .map(HSpec::Fixed)
                .map_err(|_| Error::InvalidParams(format!("bad H value `{s}` (integer, `sqrt` or `n`)"))),
        }
    }
}

impl fmt::Display for HSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HSpec::Fixed(h) => write!(f, "{h}"),
            HSpec::Sqrt => f.write_str("sqrt"),
            HSpec::All => f.write_str("n"),
        }
    }
}

/// Cartesian grid of sweep cells.
#[derive(Clone, Debug)]
pub struct SweepGrid {
    pub algorithms: Vec<Algorithm>,
    pub ns: Vec<usize>,
    pub hs: Vec<HSpec>,
    pub policies: Vec<SeedPolicy>,
    pub params: Vec<CostParams>,
    pub trials: u64,
    /// Instance seed of trial `t` is `base_seed + t`.
    pub base_seed: u64,
    pub verify: bool,
}

#[derive(Clone, Copy, Debug)]
struct Cell {
    algorithm: Algorithm,
    n: usize,
    h: usize,
    policy: SeedPolicy,
    params: CostParams,
    trial: u64,
}

impl SweepGrid {
    fn cells(&self) -> Vec<Cell> {
        let mut out = Vec::new();
        for &algorithm in &self.algorithms {
            // a policy does not change the randomized variant
            let policies: &[SeedPolicy] =
                if algorithm == Algorithm::MaximaRand { &[SeedPolicy::Randomized] } else { &self.policies };
            for &n in &self.ns {
                for hs in &self.hs {
                    for &policy in policies {
                        for &params in &self.params {
                            for trial in 0..self.trials {
                                out.push(Cell { algorithm, n, h: hs.resolve(n), policy, params, trial });
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// Rows the sweep emits.
    pub fn row_count(&self) -> usize {
        self.cells().len()
    }
}

fn run_cell(grid: &SweepGrid, cell: &Cell) -> RunRow {
    let seed = grid.base_seed + cell.trial;
    let spec = RunSpec { algorithm: cell.algorithm, policy: cell.policy, params: cell.params, rng_seed: seed, verify: grid.verify };
    let failed = |status: String| {
        let mut row = RunRow::blank(cell.algorithm, cell.n as u64, cell.policy, cell.params, seed);
        row.h = cell.h as u64;
        row.status = status;
        row
    };
    let inst = InstanceSpec::new(cell.algorithm.instance_kind(), cell.n, cell.h, seed);
    let points = match generate(&inst) {
        Ok(p) => p,
        Err(e) => return failed(format!("infeasible: {e}")),
    };
    match run_algorithm(&points, &spec) {
        Ok((row, _)) => row,
        Err(Error::Verification(msg)) => failed(format!("mismatch: {msg}")),
        Err(e) => failed(format!("error: {e}")),
    }
}

/// Worker count: the `CO_GEOM_THREADS` cap if set, else rayon's default.
pub fn sweep_threads() -> Result<usize> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&t| t >= 1)
            .ok_or_else(|| Error::InvalidParams(format!("{THREADS_ENV}={v} is not a positive integer"))),
        Err(_) => Ok(rayon::current_num_threads()),
    }
}

/// Runs every cell, streaming rows to `out` as they complete. Failing cells
/// are kept with a non-`ok` status. Returns the rows in grid order.
pub fn sweep<W: Write + Send>(grid: &SweepGrid, out: W, threads: usize) -> Result<Vec<RunRow>> {
    let cells = grid.cells();
    let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    writer.write_record(RunRow::HEADER).map_err(csv_err)?;
    let sink = Mutex::new(writer);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::InvalidParams(e.to_string()))?;
    let rows: Vec<Result<RunRow>> = pool.install(|| {
        cells
            .par_iter()
            .map(|cell| {
                let row = run_cell(grid, cell);
                let mut w = sink.lock().expect("csv sink poisoned");
                w.serialize(&row).map_err(csv_err)?;
                w.flush()?;
                Ok(row)
            })
            .collect()
    });
    rows.into_iter().collect()
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

/// Writes rows with a header.
pub fn write_rows<W: Write>(out: W, rows: &[RunRow]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(RunRow::HEADER).map_err(csv_err)?;
    for r in rows {
        w.serialize(r).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}
