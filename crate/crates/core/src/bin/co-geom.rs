use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use co_geom::adversary::{run_against, write_transcript, Adapter, AdvConfig, DFn, MaximaAdapter, SortScanAdapter, ZeroAdapter};
use co_geom::cost::CostParams;
use co_geom::datagen::{generate, InstanceKind, InstanceSpec};
use co_geom::geom::{read_points, write_points};
use co_geom::harness::{run_algorithm, sweep, sweep_threads, write_rows, Algorithm, HSpec, RunSpec, SweepGrid};
use co_geom::maxima::SeedPolicy;
use co_geom::potential::{game_max_bruteforce, phi, GameBounds, GrowthFn, StatusVector};
use co_geom::{Error, Result};

const EXIT_USAGE: u8 = 1;
const EXIT_VERIFY: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

#[derive(Parser)]
#[command(name = "co-geom", version, about = "Output-sensitive maxima and convex hulls on a simulated memory hierarchy")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate an instance with a prescribed output size.
    Gen(GenArgs),
    /// Run one algorithm on an instance and print a CSV row.
    Run(RunArgs),
    /// Run a parameter grid and write one CSV row per cell and trial.
    Sweep(SweepArgs),
    /// Play the lower-bound adversary against an algorithm.
    Adversary(AdversaryArgs),
    /// Tabulate the potential function next to the exhaustive game value.
    Phi(PhiArgs),
}

#[derive(Args)]
struct CacheArgs {
    /// Cache size M in words.
    #[arg(short = 'M', long = "memory", default_value_t = 1 << 16)]
    memory: u64,
    /// Block size B in words.
    #[arg(short = 'B', long = "block", default_value_t = 1 << 8)]
    block: u64,
}

impl CacheArgs {
    fn params(&self) -> Result<CostParams> {
        CostParams::new(self.memory, self.block)
    }
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum, default_value_t = InstanceKind::Maxima)]
    kind: InstanceKind,
    #[arg(long)]
    n: usize,
    /// Output size.
    #[arg(long)]
    h: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Add duplicates and, for hulls, points on hull edges.
    #[arg(long)]
    degenerate: bool,
    /// Keep the generator's point order.
    #[arg(long)]
    no_shuffle: bool,
    /// Output file; stdout if omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, short, value_enum)]
    algorithm: Algorithm,
    /// Instance file; stdin if omitted.
    #[arg(long, short)]
    input: Option<PathBuf>,
    /// `constant:S`, `lambda-n:S`, `lambda-m:S` or `randomized`.
    #[arg(long, default_value = "constant:2")]
    policy: SeedPolicy,
    #[command(flatten)]
    cache: CacheArgs,
    #[arg(long, default_value_t = 0)]
    rng_seed: u64,
    /// Skip the oracle check.
    #[arg(long)]
    no_verify: bool,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_enum, value_delimiter = ',', default_value = "maxima")]
    algorithm: Vec<Algorithm>,
    /// Sizes: `4096`, `2^12` or a power range `2^12..2^16`.
    #[arg(long = "n", value_delimiter = ',', required = true)]
    ns: Vec<String>,
    /// Output sizes: integers, `sqrt` or `n`.
    #[arg(long = "h", value_delimiter = ',', required = true)]
    hs: Vec<HSpec>,
    #[arg(long = "policy", value_delimiter = ',', default_value = "constant:2")]
    policies: Vec<SeedPolicy>,
    /// Cache configurations as `M:B`.
    #[arg(long = "mb", value_delimiter = ',', default_value = "65536:256")]
    mb: Vec<String>,
    #[arg(long, default_value_t = 1)]
    trials: u64,
    /// Instance seed of the first trial.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    no_verify: bool,
    /// Output CSV; stdout if omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum AdapterKind {
    Maxima,
    Sort,
    Zero,
}

#[derive(Args)]
struct AdversaryArgs {
    #[arg(long)]
    n: usize,
    /// Split depth as a function of the top-node count: `3`, `x+1`, `2x`,
    /// `ack:i` or `pow-ack:i`.
    #[arg(long, default_value = "2x")]
    dfn: DFn,
    #[arg(long, default_value_t = 2)]
    zeta: u32,
    #[arg(long, value_enum, default_value_t = AdapterKind::Maxima)]
    adapter: AdapterKind,
    /// Comparisons allowed per epoch.
    #[arg(long)]
    epoch_budget: Option<u64>,
    /// Transcript CSV; stdout if omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct PhiArgs {
    /// Level `s`: the growth function is `A_{s+1}`.
    #[arg(long, conflicts_with = "growth")]
    s: Option<u32>,
    /// Growth function: `x+c`, `cx` or `ack:i`.
    #[arg(long, default_value = "x+1")]
    growth: DFn,
    #[arg(long, default_value_t = 3)]
    h_max: u64,
    #[arg(long, default_value_t = 2)]
    t_max: u64,
    #[arg(long, default_value_t = 2)]
    kappa_max: u32,
}

fn open_out(path: &Option<PathBuf>) -> Result<Box<dyn Write + Send>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn cmd_gen(a: GenArgs) -> Result<()> {
    let spec = InstanceSpec { shuffle: !a.no_shuffle, degenerate: a.degenerate, ..InstanceSpec::new(a.kind, a.n, a.h, a.seed) };
    let points = generate(&spec)?;
    let mut out = open_out(&a.output)?;
    write_points(&mut out, &[spec.header()], &points)?;
    out.flush()?;
    Ok(())
}

fn cmd_run(a: RunArgs) -> Result<()> {
    let points = match &a.input {
        Some(p) => read_points(BufReader::new(File::open(p)?))?,
        None => read_points(io::stdin().lock())?,
    };
    let spec = RunSpec {
        algorithm: a.algorithm,
        policy: a.policy,
        params: a.cache.params()?,
        rng_seed: a.rng_seed,
        verify: !a.no_verify,
    };
    let (row, _) = run_algorithm(&points, &spec)?;
    write_rows(io::stdout().lock(), &[row])
}

/// `4096`, `2^12`, or `2^12..2^16` (every power in between).
fn parse_sizes(items: &[String]) -> Result<Vec<usize>> {
    let bad = |s: &str| Error::InvalidParams(format!("bad size `{s}`"));
    let one = |s: &str| -> Result<usize> {
        match s.trim().strip_prefix("2^") {
            Some(e) => e.parse::<u32>().ok().and_then(|e| 1usize.checked_shl(e)).ok_or_else(|| bad(s)),
            None => s.trim().parse().map_err(|_| bad(s)),
        }
    };
    let mut out = Vec::new();
    for item in items {
        match item.split_once("..") {
            Some((lo, hi)) => {
                let (lo, hi) = (one(lo)?, one(hi)?);
                if !lo.is_power_of_two() || !hi.is_power_of_two() || lo > hi {
                    return Err(bad(item));
                }
                let mut n = lo;
                while n <= hi {
                    out.push(n);
                    n *= 2;
                }
            }
            None => out.push(one(item)?),
        }
    }
    Ok(out)
}

fn cmd_sweep(a: SweepArgs) -> Result<()> {
    let params = a
        .mb
        .iter()
        .map(|s| {
            let (m, b) = s.split_once(':').ok_or_else(|| Error::InvalidParams(format!("expected M:B, got `{s}`")))?;
            let num = |v: &str| v.trim().parse::<u64>().map_err(|_| Error::InvalidParams(format!("bad number `{v}`")));
            CostParams::new(num(m)?, num(b)?)
        })
        .collect::<Result<Vec<_>>>()?;
    let grid = SweepGrid {
        algorithms: a.algorithm,
        ns: parse_sizes(&a.ns)?,
        hs: a.hs,
        policies: a.policies,
        params,
        trials: a.trials,
        base_seed: a.seed,
        verify: !a.no_verify,
    };
    let out = open_out(&a.output)?;
    let rows = sweep(&grid, out, sweep_threads()?)?;
    let failed = rows.iter().filter(|r| r.status != "ok").count();
    eprintln!("{} rows, {} failed cells", rows.len(), failed);
    if let Some(r) = rows.iter().find(|r| r.status.starts_with("mismatch")) {
        return Err(Error::Verification(format!("N={} H={}: {}", r.n, r.h, r.status)));
    }
    Ok(())
}

fn cmd_adversary(a: AdversaryArgs) -> Result<()> {
    let cfg = AdvConfig { epoch_budget: a.epoch_budget, ..AdvConfig::new(a.n, a.zeta, a.dfn) };
    let mut adapter: Box<dyn Adapter> = match a.adapter {
        AdapterKind::Maxima => Box::new(MaximaAdapter::default()),
        AdapterKind::Sort => Box::new(SortScanAdapter),
        AdapterKind::Zero => Box::new(ZeroAdapter),
    };
    let report = run_against(cfg, adapter.as_mut())?;
    let mut out = open_out(&a.output)?;
    write_transcript(&mut out, &report.transcript)?;
    out.flush()?;
    eprintln!(
        "adapter={} comparisons={} epochs={} top_nodes={} live={} terminated={} all_terminated={} budget_exceeded={} charge={} forced_io={:.2} correct={}",
        report.adapter,
        report.comparisons,
        report.epochs.len(),
        report.top_nodes,
        report.live_tops,
        report.terminated_tops,
        report.all_terminated,
        report.budget_exceeded,
        report.total_charge,
        report.forced_io,
        report.correct,
    );
    if !report.violations.is_empty() {
        return Err(Error::InvariantViolation(report.violations.join("; ")));
    }
    if !report.correct {
        return Err(Error::Verification(format!(
            "announced {} points, which is not the maxima set of every consistent input ({} maxima under the default placement)",
            report.announced.len(),
            report.maxima.len()
        )));
    }
    Ok(())
}

fn cmd_phi(a: PhiArgs) -> Result<()> {
    let growth = match (a.s, a.growth) {
        (Some(s), _) => GrowthFn::Ack(s + 1),
        (None, DFn::Growth(g)) => g,
        (None, other) => return Err(Error::InvalidParams(format!("{other:?} is not a growth function"))),
    };
    let mut out = csv::Writer::from_writer(io::stdout().lock());
    let csv_err = |e: csv::Error| Error::Io(io::Error::other(e));
    out.write_record(["h", "t", "kappa", "phi", "game", "match"]).map_err(csv_err)?;
    let mut mismatches = 0;
    for h in 1..=a.h_max {
        for kappa in 1..=a.kappa_max {
            for t in 0..=a.t_max {
                let v = StatusVector::new(h, &[(t, kappa)]);
                let p = phi(&v, &growth);
                let (game, matched) = match game_max_bruteforce(&v, &growth, GameBounds::default()) {
                    Ok(g) => (g.to_string(), if p.finite() == Some(g) { "yes" } else { "no" }),
                    Err(Error::Explosion(_)) => ("explosion".to_string(), "-"),
                    Err(e) => return Err(e),
                };
                if matched == "no" {
                    mismatches += 1;
                }
                let row = [h.to_string(), t.to_string(), kappa.to_string(), p.to_string(), game, matched.to_string()];
                out.write_record(&row).map_err(csv_err)?;
            }
        }
    }
    out.flush()?;
    if mismatches > 0 {
        return Err(Error::Verification(format!("{mismatches} rows where the potential and the game disagree")));
    }
    Ok(())
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Verification(_) => EXIT_VERIFY,
        Error::InvariantViolation(_) | Error::Explosion(_) => EXIT_INTERNAL,
        _ => EXIT_USAGE,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.cmd {
        Cmd::Gen(a) => cmd_gen(a),
        Cmd::Run(a) => cmd_run(a),
        Cmd::Sweep(a) => cmd_sweep(a),
        Cmd::Adversary(a) => cmd_adversary(a),
        Cmd::Phi(a) => cmd_phi(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
