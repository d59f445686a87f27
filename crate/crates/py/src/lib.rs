//! Python bindings. Points cross the boundary as `(x, y)` integer tuples.

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

use co_geom::ackermann::{self, SatInt};
use co_geom::adversary::{self as adv, Adapter, AdvConfig, DFn};
use co_geom::cost::{self, CostParams};
use co_geom::datagen::{self, InstanceKind, InstanceSpec};
use co_geom::geom::Point;
use co_geom::harness::{self, Algorithm, RunSpec};
use co_geom::hull::{self, HullConfig};
use co_geom::iosim::CostReport;
use co_geom::maxima::{maxima_det, MaximaConfig};
use co_geom::oracle;
use co_geom::potential::{self, GrowthFn, StatusVector};
use co_geom::Error;

create_exception!(co_geom_py, VerificationError, PyException);

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Verification(msg) => VerificationError::new_err(msg),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn to_points(pts: Vec<(i64, i64)>) -> PyResult<Vec<Point>> {
    pts.into_iter().map(|(x, y)| Point::checked(x, y).map_err(py_err)).collect()
}

fn from_points(pts: &[Point]) -> Vec<(i64, i64)> {
    pts.iter().map(|p| (p.x, p.y)).collect()
}

fn params(memory: u64, block: u64) -> PyResult<CostParams> {
    CostParams::new(memory, block).map_err(py_err)
}

fn parse<T: std::str::FromStr<Err = Error>>(s: &str) -> PyResult<T> {
    s.parse().map_err(py_err)
}

/// `M` words of cache in blocks of `B` words.
#[pyclass(name = "CostParams", frozen, skip_from_py_object)]
#[derive(Clone, Copy)]
struct PyCostParams(CostParams);

#[pymethods]
impl PyCostParams {
    #[new]
    fn new(memory: u64, block: u64) -> PyResult<Self> {
        params(memory, block).map(PyCostParams)
    }

    #[getter]
    fn memory(&self) -> u64 {
        self.0.memory()
    }

    #[getter]
    fn block(&self) -> u64 {
        self.0.block()
    }

    #[getter]
    fn lines(&self) -> u64 {
        self.0.lines()
    }

    fn scan_cost(&self, n: u64) -> f64 {
        cost::scan_cost(n, &self.0)
    }

    fn sort_cost(&self, n: u64) -> f64 {
        cost::sort_cost(n, &self.0)
    }

    fn distr_cost(&self, n: u64, k: u64) -> PyResult<f64> {
        if k == 0 {
            return Err(PyValueError::new_err("k must be at least 1"));
        }
        Ok(cost::distr_cost(n, k, &self.0))
    }

    fn maxima_io_bound(&self, n: u64, output: u64, seed: u64) -> f64 {
        cost::maxima_io_bound(n, output, seed, &self.0)
    }

    fn randomized_io_bound(&self, n: u64, output: u64) -> f64 {
        cost::randomized_io_bound(n, output, &self.0)
    }

    fn __repr__(&self) -> String {
        format!("CostParams(memory={}, block={})", self.0.memory(), self.0.block())
    }
}

/// Output of one algorithm run with the simulator's counters.
#[pyclass(name = "RunResult", frozen, get_all)]
struct PyRunResult {
    points: Vec<(i64, i64)>,
    h0: u64,
    io_count: u64,
    comparisons: u64,
    reads: u64,
    writes: u64,
    distinct_blocks: u64,
}

#[pymethods]
impl PyRunResult {
    fn __len__(&self) -> usize {
        self.points.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "RunResult(H={}, h0={}, io_count={}, comparisons={})",
            self.points.len(),
            self.h0,
            self.io_count,
            self.comparisons
        )
    }
}

impl PyRunResult {
    fn new(points: &[Point], h0: u64, r: CostReport) -> Self {
        PyRunResult {
            points: from_points(points),
            h0,
            io_count: r.io_count,
            comparisons: r.comparisons,
            reads: r.reads,
            writes: r.writes,
            distinct_blocks: r.distinct_blocks,
        }
    }
}

/// Seeded maxima, in decreasing x.
#[pyfunction]
#[pyo3(signature = (points, policy = "constant:2", memory = 65536, block = 256, rng_seed = 0))]
fn maxima(py: Python<'_>, points: Vec<(i64, i64)>, policy: &str, memory: u64, block: u64, rng_seed: u64) -> PyResult<PyRunResult> {
    let pts = to_points(points)?;
    let cfg = MaximaConfig { policy: parse(policy)?, rng_seed };
    let p = params(memory, block)?;
    let r = py.detach(|| maxima_det(&pts, &cfg, p)).map_err(py_err)?;
    Ok(PyRunResult::new(&r.maxima, r.h0, r.report))
}

/// Randomized maxima.
#[pyfunction]
#[pyo3(signature = (points, rng_seed = 0, memory = 65536, block = 256))]
fn maxima_rand(py: Python<'_>, points: Vec<(i64, i64)>, rng_seed: u64, memory: u64, block: u64) -> PyResult<PyRunResult> {
    let pts = to_points(points)?;
    let p = params(memory, block)?;
    let r = py.detach(|| co_geom::maxima::maxima_rand(&pts, rng_seed, p)).map_err(py_err)?;
    Ok(PyRunResult::new(&r.maxima, r.h0, r.report))
}

/// Convex hull, counter-clockwise from the lowest leftmost point.
#[pyfunction]
#[pyo3(signature = (points, policy = "constant:2", memory = 65536, block = 256, rng_seed = 0))]
fn convex_hull(py: Python<'_>, points: Vec<(i64, i64)>, policy: &str, memory: u64, block: u64, rng_seed: u64) -> PyResult<PyRunResult> {
    let pts = to_points(points)?;
    let cfg = HullConfig { policy: parse(policy)?, rng_seed };
    let p = params(memory, block)?;
    let r = py.detach(|| hull::convex_hull(&pts, &cfg, p)).map_err(py_err)?;
    Ok(PyRunResult::new(&r.vertices, r.h0, r.report))
}

#[pyfunction]
fn oracle_maxima(points: Vec<(i64, i64)>) -> PyResult<Vec<(i64, i64)>> {
    Ok(from_points(&oracle::oracle_maxima(&to_points(points)?)))
}

#[pyfunction]
fn oracle_hull(points: Vec<(i64, i64)>) -> PyResult<Vec<(i64, i64)>> {
    Ok(from_points(&oracle::oracle_hull(&to_points(points)?)))
}

/// Instance of `n` points with exactly `h` maxima or hull vertices.
#[pyfunction]
#[pyo3(signature = (kind, n, h, seed = 1, degenerate = false, shuffle = true))]
fn generate(kind: &str, n: usize, h: usize, seed: u64, degenerate: bool, shuffle: bool) -> PyResult<Vec<(i64, i64)>> {
    let kind = match kind {
        "maxima" => InstanceKind::Maxima,
        "hull" => InstanceKind::Hull,
        other => return Err(PyValueError::new_err(format!("unknown instance kind `{other}`"))),
    };
    let spec = InstanceSpec { degenerate, shuffle, ..InstanceSpec::new(kind, n, h, seed) };
    datagen::generate(&spec).map(|p| from_points(&p)).map_err(py_err)
}

/// One verified run as a dict with the CSV row's columns.
#[pyfunction]
#[pyo3(signature = (algorithm, points, policy = "constant:2", memory = 65536, block = 256, rng_seed = 0, verify = true))]
#[allow(clippy::too_many_arguments)]
fn run<'py>(
    py: Python<'py>,
    algorithm: &str,
    points: Vec<(i64, i64)>,
    policy: &str,
    memory: u64,
    block: u64,
    rng_seed: u64,
    verify: bool,
) -> PyResult<Bound<'py, pyo3::types::PyDict>> {
    let algorithm = match algorithm {
        "maxima" => Algorithm::Maxima,
        "maxima-rand" => Algorithm::MaximaRand,
        "hull" => Algorithm::Hull,
        other => return Err(PyValueError::new_err(format!("unknown algorithm `{other}`"))),
    };
    let pts = to_points(points)?;
    let spec = RunSpec { algorithm, policy: parse(policy)?, params: params(memory, block)?, rng_seed, verify };
    let (row, _) = py.detach(|| harness::run_algorithm(&pts, &spec)).map_err(py_err)?;
    let d = pyo3::types::PyDict::new(py);
    d.set_item("algorithm", row.algorithm)?;
    d.set_item("N", row.n)?;
    d.set_item("H", row.h)?;
    d.set_item("seed_policy", row.seed_policy)?;
    d.set_item("s", row.s)?;
    d.set_item("h0", row.h0)?;
    d.set_item("M", row.memory)?;
    d.set_item("B", row.block)?;
    d.set_item("rng_seed", row.rng_seed)?;
    d.set_item("rng", row.rng)?;
    d.set_item("io_count", row.io_count)?;
    d.set_item("comparisons", row.comparisons)?;
    d.set_item("distinct_blocks", row.distinct_blocks)?;
    d.set_item("model_distr_cost", row.model_distr_cost)?;
    d.set_item("model_bound", row.model_bound)?;
    d.set_item("wall_time_ms", row.wall_time_ms)?;
    d.set_item("verified", row.verified)?;
    d.set_item("status", row.status)?;
    Ok(d)
}

fn sat(v: SatInt) -> Option<u64> {
    v.finite()
}

/// `A_i(n)`, or `None` once it leaves the representable range.
#[pyfunction]
fn ack(i: u32, n: u64) -> Option<u64> {
    sat(ackermann::ack(i, SatInt::new(n)))
}

#[pyfunction]
fn lambda_inv(i: u32, x: u64) -> PyResult<u64> {
    if x == 0 {
        return Err(PyValueError::new_err("x must be at least 1"));
    }
    Ok(ackermann::lambda_inv(i, x))
}

#[pyfunction]
fn alpha_inv(n: u64, x: u64) -> PyResult<u32> {
    if n == 0 || x == 0 {
        return Err(PyValueError::new_err("n and x must be at least 1"));
    }
    Ok(ackermann::alpha_inv(n, x))
}

fn growth(spec: &str) -> PyResult<GrowthFn> {
    match parse::<DFn>(spec)? {
        DFn::Growth(g) => Ok(g),
        _ => Err(PyValueError::new_err(format!("`{spec}` is not a growth function"))),
    }
}

fn status(h: u64, seq: &[(u64, u32)]) -> PyResult<StatusVector> {
    let v = StatusVector::new(h, seq);
    if !v.is_well_formed() {
        return Err(PyValueError::new_err("need h >= 1 and nondecreasing potentials >= 1"));
    }
    Ok(v)
}

/// Potential of `(h; seq)` under a growth function such as `x+1`, `2x` or
/// `ack:2`. `None` when it saturates.
#[pyfunction]
#[pyo3(signature = (h, seq, growth_fn = "x+1"))]
fn phi(h: u64, seq: Vec<(u64, u32)>, growth_fn: &str) -> PyResult<Option<u64>> {
    Ok(sat(potential::phi(&status(h, &seq)?, &growth(growth_fn)?)))
}

/// Exhaustive game value of `(h; seq)`.
#[pyfunction]
#[pyo3(signature = (h, seq, growth_fn = "x+1"))]
fn game_max(h: u64, seq: Vec<(u64, u32)>, growth_fn: &str) -> PyResult<u64> {
    potential::game_max_bruteforce(&status(h, &seq)?, &growth(growth_fn)?, potential::GameBounds::default()).map_err(py_err)
}

/// Plays the lower-bound adversary against an algorithm and returns a
/// summary dict; `transcript` is a list of `(step, kind, payload)`.
#[pyfunction]
#[pyo3(signature = (n, dfn = "2x", zeta = 2, adapter = "maxima", epoch_budget = None))]
fn adversary<'py>(
    py: Python<'py>,
    n: usize,
    dfn: &str,
    zeta: u32,
    adapter: &str,
    epoch_budget: Option<u64>,
) -> PyResult<Bound<'py, pyo3::types::PyDict>> {
    let cfg = AdvConfig { epoch_budget, ..AdvConfig::new(n, zeta, parse(dfn)?) };
    let mut a: Box<dyn Adapter + Send> = match adapter {
        "maxima" => Box::new(adv::MaximaAdapter::default()),
        "sort" => Box::new(adv::SortScanAdapter),
        "zero" => Box::new(adv::ZeroAdapter),
        other => return Err(PyValueError::new_err(format!("unknown adapter `{other}`"))),
    };
    let r = py.detach(|| adv::run_against(cfg, a.as_mut())).map_err(py_err)?;
    let d = pyo3::types::PyDict::new(py);
    d.set_item("adapter", r.adapter)?;
    d.set_item("announced", r.announced)?;
    d.set_item("maxima", r.maxima)?;
    d.set_item("correct", r.correct)?;
    d.set_item("comparisons", r.comparisons)?;
    d.set_item("epochs", r.epochs.len())?;
    d.set_item("top_nodes", sat(r.top_nodes))?;
    d.set_item("live_tops", r.live_tops)?;
    d.set_item("terminated_tops", r.terminated_tops)?;
    d.set_item("all_terminated", r.all_terminated)?;
    d.set_item("budget_exceeded", r.budget_exceeded)?;
    d.set_item("total_charge", r.total_charge)?;
    d.set_item("forced_io", r.forced_io)?;
    d.set_item("violations", r.violations)?;
    let transcript: Vec<(u64, &str, String)> =
        r.transcript.iter().map(|e| (e.step, e.kind.as_str(), e.payload.clone())).collect();
    d.set_item("transcript", transcript)?;
    Ok(d)
}

#[pymodule]
pub fn co_geom_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCostParams>()?;
    m.add_class::<PyRunResult>()?;
    m.add("VerificationError", m.py().get_type::<VerificationError>())?;
    m.add_function(wrap_pyfunction!(maxima, m)?)?;
    m.add_function(wrap_pyfunction!(maxima_rand, m)?)?;
    m.add_function(wrap_pyfunction!(convex_hull, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_maxima, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_hull, m)?)?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(ack, m)?)?;
    m.add_function(wrap_pyfunction!(lambda_inv, m)?)?;
    m.add_function(wrap_pyfunction!(alpha_inv, m)?)?;
    m.add_function(wrap_pyfunction!(phi, m)?)?;
    m.add_function(wrap_pyfunction!(game_max, m)?)?;
    m.add_function(wrap_pyfunction!(adversary, m)?)?;
    Ok(())
}
