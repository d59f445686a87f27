//! Comparison adversary for planar maxima at desk scale.
//!
//! Points live in the nodes of an infinite binary tree. Node `(d, i)` owns
//! the square `(i/2^d, (i+1)/2^d] x (1-(i+1)/2^d, 1-i/2^d]`; the left child
//! is its upper-left quadrant and the right child its lower-right one, so
//! nodes that are not nested are ordered along the anti-diagonal: the one
//! further left has the smaller x and the larger y. A point may sit anywhere
//! in its node's region, and a comparison between nested points is settled
//! by pushing one of them down.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;

use crate::ackermann::{ack, SatInt};
use crate::cost::CostParams;
use crate::error::{Error, Result};
use crate::geom::Point;
use crate::iosim::Simulator;
use crate::maxima::{maxima_with, MaximaOpts, PointOracle};
use crate::oracle::oracle_maxima;
use crate::potential::{Growth, GrowthFn};

pub type PointId = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::X => "x",
            Axis::Y => "y",
        })
    }
}

fn sym(o: Ordering) -> &'static str {
    match o {
        Ordering::Less => "<",
        Ordering::Equal => "=",
        Ordering::Greater => ">",
    }
}

/// Node `index` (0-based) at `depth`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId {
    pub depth: u32,
    pub index: BigUint,
}

impl NodeId {
    pub fn root() -> Self {
        NodeId { depth: 0, index: BigUint::ZERO }
    }

    pub fn child(&self, right: bool) -> Self {
        let mut index = &self.index << 1u32;
        if right {
            index += 1u32;
        }
        NodeId { depth: self.depth + 1, index }
    }

    fn sibling(&self) -> Self {
        debug_assert!(self.depth > 0);
        NodeId { depth: self.depth, index: &self.index ^ BigUint::one() }
    }

    pub fn ancestor_at(&self, depth: u32) -> Self {
        assert!(depth <= self.depth);
        NodeId { depth, index: &self.index >> (self.depth - depth) }
    }

    /// Inclusive.
    pub fn is_ancestor_of(&self, other: &NodeId) -> bool {
        self.depth <= other.depth && other.ancestor_at(self.depth).index == self.index
    }

    /// Left-to-right order of two disjoint regions; `None` when nested.
    pub fn order(&self, other: &NodeId) -> Option<Ordering> {
        let d = self.depth.min(other.depth);
        let a = self.ancestor_at(d).index;
        let b = other.ancestor_at(d).index;
        (a != b).then(|| a.cmp(&b))
    }

    fn frac(num: BigUint, log_den: u32) -> BigRational {
        BigRational::new(BigInt::from(num), BigInt::one() << log_den)
    }

    /// `(x_lo, x_hi, y_lo, y_hi)`; the region is open at the low ends.
    pub fn region(&self) -> [BigRational; 4] {
        let lo = Self::frac(self.index.clone(), self.depth);
        let hi = Self::frac(&self.index + 1u32, self.depth);
        let one = BigRational::one();
        [lo.clone(), hi.clone(), &one - &hi, &one - &lo]
    }

    pub fn center(&self) -> (BigRational, BigRational) {
        let x = Self::frac((&self.index << 1u32) + 1u32, self.depth + 1);
        let y = BigRational::one() - &x;
        (x, y)
    }

    pub fn ne_corner(&self) -> (BigRational, BigRational) {
        let [_, x, _, y] = self.region();
        (x, y)
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.depth, self.index)
    }
}

/// A coordinate with an infinitesimal tiebreak: `value + tie * eps`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Coord {
    pub value: BigRational,
    pub tie: i64,
}

impl Coord {
    fn pair((x, y): (BigRational, BigRational), k: i64, spread: Spread) -> (Coord, Coord) {
        let ty = match spread {
            Spread::AntiDiagonal => -k,
            Spread::Diagonal => k,
        };
        (Coord { value: x, tie: k }, Coord { value: y, tie: ty })
    }
}

/// How unfixed points sharing a node are separated. Both are consistent
/// with every answer, since such points were never compared.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Spread {
    /// Mutually incomparable: all of them are maxima.
    AntiDiagonal,
    /// A chain: only the last one is a maximum.
    Diagonal,
}

/// Number of levels a resolved top node pushes its points down by, as a
/// function of the current top-node count.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DFn {
    Const(u64),
    Growth(GrowthFn),
    /// `2^{A_s(x)}`.
    PowAck(u32),
}

impl DFn {
    pub fn eval(&self, h: SatInt) -> SatInt {
        match *self {
            DFn::Const(c) => SatInt::new(c),
            DFn::Growth(g) => g.apply(h),
            DFn::PowAck(s) => ack(s, h).pow2(),
        }
    }
}

impl FromStr for DFn {
    type Err = Error;

    /// `3`, `x+1`, `2x`, `ack:2`, `pow-ack:1`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParams(format!("unrecognised growth function `{s}`"));
        let num = |t: &str| t.trim().parse::<u64>().map_err(|_| bad());
        let s = s.trim();
        let f = if let Some(c) = s.strip_prefix("x+") {
            DFn::Growth(GrowthFn::Add(num(c)?))
        } else if let Some(c) = s.strip_suffix('x') {
            DFn::Growth(GrowthFn::Scale(if c.is_empty() { 1 } else { num(c)? }))
        } else if let Some(i) = s.strip_prefix("ack:") {
            DFn::Growth(GrowthFn::Ack(num(i)? as u32))
        } else if let Some(i) = s.strip_prefix("pow-ack:") {
            DFn::PowAck(num(i)? as u32)
        } else {
            DFn::Const(num(s)?)
        };
        match f {
            DFn::Const(0) | DFn::Growth(GrowthFn::Add(0) | GrowthFn::Scale(0..=1) | GrowthFn::Ack(0)) => Err(bad()),
            f => Ok(f),
        }
    }
}

#[derive(Clone, Debug)]
pub struct AdvConfig {
    pub n: usize,
    /// Charge at which a top node is terminated instead of split.
    pub zeta: u32,
    pub d_fn: DFn,
    /// A top node is resolved once its own ordinary count drops to
    /// `floor(N_v * num / den)`.
    pub trigger: (u64, u64),
    /// Comparisons allowed per epoch; exceeding it terminates every top node.
    pub epoch_budget: Option<u64>,
    /// Splits deeper than this terminate instead.
    pub depth_cap: u32,
    /// Block size for the forced-I/O figure.
    pub block: u64,
}

impl AdvConfig {
    pub fn new(n: usize, zeta: u32, d_fn: DFn) -> Self {
        AdvConfig { n, zeta, d_fn, trigger: (1, 2), epoch_budget: None, depth_cap: 1024, block: 1 }
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParams(m.into()));
        if self.n == 0 || self.n > u32::MAX as usize {
            return bad("N must be in 1..=2^32-1");
        }
        if self.zeta == 0 {
            return bad("zeta must be at least 1");
        }
        let (num, den) = self.trigger;
        if num == 0 || num >= den {
            return bad("trigger fraction must lie strictly between 0 and 1");
        }
        if self.block == 0 {
            return bad("B must be at least 1");
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EventKind {
    Cmp,
    Move,
    Activate,
    Terminate,
    FreeInfo,
    Budget,
}

impl EventKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            EventKind::Cmp => "cmp",
            EventKind::Move => "move",
            EventKind::Activate => "activate",
            EventKind::Terminate => "terminate",
            EventKind::FreeInfo => "free-info",
            EventKind::Budget => "budget",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Event {
    pub step: u64,
    pub kind: EventKind,
    pub payload: String,
}

pub fn write_transcript(out: impl Write, events: &[Event]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record(["step", "kind", "payload"]).map_err(csv_err)?;
    for e in events {
        w.write_record([e.step.to_string().as_str(), e.kind.as_str(), e.payload.as_str()]).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Clone, Debug)]
pub struct EpochInfo {
    pub h_before: SatInt,
    pub d: u64,
    pub h_after: SatInt,
    /// Descendants that received points.
    pub activated: usize,
    /// Descendants left empty.
    pub empty: SatInt,
}

#[derive(Clone, Copy, Debug)]
struct Answered {
    axis: Axis,
    p: PointId,
    q: PointId,
    outcome: Ordering,
}

#[derive(Clone, Debug)]
struct PState {
    node: NodeId,
    deep: bool,
    charge: u32,
    top: usize,
    fixed: Option<(Coord, Coord)>,
}

#[derive(Clone, Debug)]
struct Top {
    node: NodeId,
    n_init: usize,
    at_node: usize,
    charge: u32,
    live: bool,
    terminated: bool,
    corner: Option<PointId>,
}

pub struct Adversary {
    cfg: AdvConfig,
    pts: Vec<PState>,
    tops: Vec<Top>,
    /// Points under each top node, ascending.
    members: Vec<Vec<PointId>>,
    h: SatInt,
    empty: SatInt,
    events: Vec<Event>,
    log: Vec<Answered>,
    epochs: Vec<EpochInfo>,
    epoch_cmps: u64,
    comparisons: u64,
    budget_exceeded: bool,
    violations: Vec<String>,
}

impl Adversary {
    pub fn new(cfg: AdvConfig) -> Result<Self> {
        cfg.validate()?;
        let n = cfg.n;
        let pts = (0..n)
            .map(|_| PState { node: NodeId::root(), deep: false, charge: 0, top: 0, fixed: None })
            .collect();
        let root = Top {
            node: NodeId::root(),
            n_init: n,
            at_node: n,
            charge: 0,
            live: true,
            terminated: false,
            corner: None,
        };
        Ok(Adversary {
            cfg,
            pts,
            tops: vec![root],
            members: vec![(0..n as PointId).collect()],
            h: SatInt::ONE,
            empty: SatInt::ZERO,
            events: Vec::new(),
            log: Vec::new(),
            epochs: Vec::new(),
            epoch_cmps: 0,
            comparisons: 0,
            budget_exceeded: false,
            violations: Vec::new(),
        })
    }

    pub fn n(&self) -> usize {
        self.pts.len()
    }

    pub fn config(&self) -> &AdvConfig {
        &self.cfg
    }

    pub fn node_of(&self, p: PointId) -> &NodeId {
        &self.pts[p as usize].node
    }

    pub fn charge_of(&self, p: PointId) -> u32 {
        self.pts[p as usize].charge
    }

    pub fn is_deep(&self, p: PointId) -> bool {
        self.pts[p as usize].deep
    }

    pub fn is_fixed(&self, p: PointId) -> bool {
        self.pts[p as usize].fixed.is_some()
    }

    /// Current top-node count by the epoch recurrence, empty descendants
    /// included.
    pub fn top_nodes(&self) -> SatInt {
        self.h
    }

    /// Top nodes that hold points.
    pub fn live_tops(&self) -> usize {
        self.tops.iter().filter(|t| t.live).count()
    }

    pub fn terminated_tops(&self) -> usize {
        self.tops.iter().filter(|t| t.live && t.terminated).count()
    }

    pub fn all_terminated(&self) -> bool {
        self.tops.iter().filter(|t| t.live).all(|t| t.terminated)
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn epochs(&self) -> &[EpochInfo] {
        &self.epochs
    }

    pub fn comparisons(&self) -> u64 {
        self.comparisons
    }

    pub fn budget_exceeded(&self) -> bool {
        self.budget_exceeded
    }

    pub fn violations(&self) -> &[String] {
        &self.violations
    }

    pub fn total_charge(&self) -> u64 {
        self.pts.iter().map(|p| p.charge as u64).sum()
    }

    fn emit(&mut self, kind: EventKind, payload: String) {
        let step = self.events.len() as u64;
        self.events.push(Event { step, kind, payload });
    }

    /// Compares `p` and `q` on `axis`, moving points as needed.
    pub fn answer(&mut self, axis: Axis, p: PointId, q: PointId) -> Ordering {
        self.comparisons += 1;
        self.epoch_cmps += 1;
        let (pi, qi) = (p as usize, q as usize);
        let mut touched = Vec::new();
        let order = if p == q {
            Ordering::Equal
        } else if let (Some(a), Some(b)) = (&self.pts[pi].fixed, &self.pts[qi].fixed) {
            match axis {
                Axis::X => a.0.cmp(&b.0),
                Axis::Y => a.1.cmp(&b.1),
            }
        } else {
            if self.pts[pi].node.order(&self.pts[qi].node).is_none() {
                self.default_move(p, q, &mut touched);
            }
            let o = self.pts[pi].node.order(&self.pts[qi].node).expect("default strategy separates the pair");
            match axis {
                Axis::X => o,
                Axis::Y => o.reverse(),
            }
        };
        self.log.push(Answered { axis, p, q, outcome: order });
        self.emit(EventKind::Cmp, format!("{axis} {p} {q} {}", sym(order)));
        for t in touched {
            self.maybe_resolve(t);
        }
        if let Some(budget) = self.cfg.epoch_budget {
            if self.epoch_cmps > budget && !self.budget_exceeded {
                self.budget_exceeded = true;
                self.emit(EventKind::Budget, format!("{} comparisons this epoch", self.epoch_cmps));
                for t in 0..self.tops.len() {
                    if self.tops[t].live && !self.tops[t].terminated {
                        self.terminate(t, false);
                    }
                }
            }
        }
        order
    }

    fn default_move(&mut self, p: PointId, q: PointId, touched: &mut Vec<usize>) {
        let np = self.pts[p as usize].node.clone();
        let nq = self.pts[q as usize].node.clone();
        if np == nq {
            self.move_point(p, np.child(false), touched);
            self.move_point(q, np.child(true), touched);
        } else if np.is_ancestor_of(&nq) {
            let off_path = nq.ancestor_at(np.depth + 1).sibling();
            self.move_point(p, off_path, touched);
        } else {
            let off_path = np.ancestor_at(nq.depth + 1).sibling();
            self.move_point(q, off_path, touched);
        }
    }

    fn move_point(&mut self, p: PointId, to: NodeId, touched: &mut Vec<usize>) {
        let st = &self.pts[p as usize];
        debug_assert!(st.fixed.is_none());
        let t = st.top;
        if !st.deep && st.node == self.tops[t].node {
            self.tops[t].at_node -= 1;
            touched.push(t);
        }
        if !st.deep && st.charge != self.tops[t].charge {
            self.violations.push(format!("point {p} carries charge {} under a top node of charge {}", st.charge, self.tops[t].charge));
        }
        self.relocate(p, to);
    }

    fn relocate(&mut self, p: PointId, to: NodeId) {
        let from = std::mem::replace(&mut self.pts[p as usize].node, to);
        let payload = format!("{p} {from} {}", self.pts[p as usize].node);
        self.emit(EventKind::Move, payload);
    }

    fn maybe_resolve(&mut self, t: usize) {
        let top = &self.tops[t];
        if !top.live || top.terminated {
            return;
        }
        let (num, den) = self.cfg.trigger;
        let threshold = (top.n_init as u128 * num as u128 / den as u128) as usize;
        // below two survivors a same-node comparison could empty the node
        if threshold < 2 || top.at_node > threshold {
            return;
        }
        if top.charge + 1 >= self.cfg.zeta {
            self.terminate(t, true);
        } else {
            let d = self.cfg.d_fn.eval(self.h);
            match d.finite().filter(|&d| d >= 1 && d <= self.cfg.depth_cap as u64) {
                Some(d) => self.transition(t, d as u32),
                None => self.terminate(t, false),
            }
        }
        self.check_charges();
    }

    /// Fixes every point under top node `t`: the lowest-numbered point at the
    /// node itself goes to its northeast corner, the rest to their region
    /// centres.
    fn terminate(&mut self, t: usize, charge: bool) {
        let v = self.tops[t].node.clone();
        let members = self.members[t].clone();
        let corner = members
            .iter()
            .copied()
            .find(|&p| !self.pts[p as usize].deep && self.pts[p as usize].node == v);
        let mut ties: HashMap<NodeId, i64> = HashMap::new();
        for &p in &members {
            let st = &mut self.pts[p as usize];
            st.fixed = Some(if Some(p) == corner {
                Coord::pair(v.ne_corner(), 0, Spread::AntiDiagonal)
            } else {
                let k = ties.entry(st.node.clone()).or_insert(0);
                *k += 1;
                Coord::pair(st.node.center(), *k - 1, Spread::AntiDiagonal)
            });
            if charge && !st.deep {
                st.charge = self.cfg.zeta;
            }
        }
        if charge {
            self.tops[t].charge = self.cfg.zeta;
        }
        self.tops[t].terminated = true;
        self.tops[t].corner = corner;
        let c = corner.map_or("none".to_string(), |p| p.to_string());
        self.emit(EventKind::Terminate, format!("{v} corner={c} charge={}", self.tops[t].charge));
    }

    fn transition(&mut self, t: usize, d: u32) {
        let v = self.tops[t].node.clone();
        let target = v.depth + d;
        let members = std::mem::take(&mut self.members[t]);
        let mut rest = Vec::new();
        for &p in &members {
            let st = &mut self.pts[p as usize];
            let rel = st.node.depth - v.depth;
            if rel == 0 {
                rest.push(p);
            } else if rel > d {
                st.deep = true;
            } else if rel < d {
                let to = NodeId { depth: target, index: &st.node.index << (target - st.node.depth) };
                self.relocate(p, to);
            }
        }
        let n = rest.len() as u64;
        for (j, &p) in rest.iter().enumerate() {
            let index = (&v.index << d) + (BigUint::from(j as u64) << d) / n;
            self.relocate(p, NodeId { depth: target, index });
        }

        let mut groups: BTreeMap<BigUint, Vec<PointId>> = BTreeMap::new();
        for &p in &members {
            let key = self.pts[p as usize].node.ancestor_at(target).index;
            groups.entry(key).or_default().push(p);
        }
        let charge = self.tops[t].charge + 1;
        self.tops[t].live = false;
        let mut reps = Vec::new();
        for (index, pts) in groups.iter() {
            let node = NodeId { depth: target, index: index.clone() };
            let id = self.tops.len();
            let mut at_node = 0;
            for &p in pts {
                let st = &mut self.pts[p as usize];
                st.top = id;
                if !st.deep {
                    st.charge += 1;
                    if st.node == node {
                        at_node += 1;
                    }
                }
            }
            self.emit(EventKind::Activate, format!("{node} n={at_node} charge={charge}"));
            self.tops.push(Top {
                node,
                n_init: at_node,
                at_node,
                charge,
                live: true,
                terminated: false,
                corner: None,
            });
            self.members.push(pts.clone());
            reps.push(pts[0]);
        }
        // adjacent groups suffice: the rest follows by transitivity
        for w in reps.windows(2) {
            self.emit(EventKind::FreeInfo, format!("{} {} x:< y:>", w[0], w[1]));
        }

        let spawned = SatInt::new(d as u64).pow2();
        let empty = spawned.saturating_sub(SatInt::new(groups.len() as u64));
        let h_before = self.h;
        self.h = self.h.add(spawned).saturating_sub(SatInt::ONE);
        self.empty = self.empty.add(empty);
        let counted = SatInt::new(self.live_tops() as u64).add(self.empty);
        if !self.h.is_inf() && counted != self.h {
            self.violations.push(format!("epoch {}: {counted} top nodes, recurrence gives {}", self.epochs.len(), self.h));
        }
        self.epochs.push(EpochInfo { h_before, d: d as u64, h_after: self.h, activated: groups.len(), empty });
        self.epoch_cmps = 0;
    }

    /// Every ordinary point under a live top node carries that node's charge.
    pub fn check_charges(&mut self) {
        for (t, top) in self.tops.iter().enumerate() {
            if !top.live {
                continue;
            }
            for &p in &self.members[t] {
                let st = &self.pts[p as usize];
                if !st.deep && st.charge != top.charge {
                    self.violations.push(format!("point {p} has charge {}, top node {} has {}", st.charge, top.node, top.charge));
                }
            }
        }
    }

    /// Places every point: fixed points where they were fixed, the others at
    /// their region centres, separated along the anti-diagonal by an
    /// infinitesimal. Replays every answered comparison against the result.
    pub fn materialize(&self) -> Result<Materialized> {
        self.materialize_with(Spread::AntiDiagonal)
    }

    pub fn materialize_with(&self, spread: Spread) -> Result<Materialized> {
        let mut ties: HashMap<&NodeId, i64> = HashMap::new();
        let coords: Vec<(Coord, Coord)> = self
            .pts
            .iter()
            .map(|st| match &st.fixed {
                Some(c) => c.clone(),
                None => {
                    let k = ties.entry(&st.node).or_insert(0);
                    *k += 1;
                    Coord::pair(st.node.center(), *k - 1, spread)
                }
            })
            .collect();
        for a in &self.log {
            let (cp, cq) = (&coords[a.p as usize], &coords[a.q as usize]);
            let o = match a.axis {
                Axis::X => cp.0.cmp(&cq.0),
                Axis::Y => cp.1.cmp(&cq.1),
            };
            if o != a.outcome {
                return Err(Error::InvariantViolation(format!(
                    "replay of {} {} {} gave {}, answered {}",
                    a.axis,
                    a.p,
                    a.q,
                    sym(o),
                    sym(a.outcome)
                )));
            }
        }
        let rank = |sel: fn(&(Coord, Coord)) -> &Coord| {
            let mut vals: Vec<&Coord> = coords.iter().map(sel).collect();
            vals.sort();
            vals.dedup();
            coords.iter().map(|c| vals.binary_search(&sel(c)).unwrap() as i64).collect::<Vec<_>>()
        };
        let (rx, ry) = (rank(|c| &c.0), rank(|c| &c.1));
        let points: Vec<Point> = rx.iter().zip(&ry).map(|(&x, &y)| Point::new(x, y)).collect();
        let index: HashMap<Point, PointId> = points.iter().enumerate().map(|(i, &p)| (p, i as PointId)).collect();
        let maxima = oracle_maxima(&points).iter().map(|p| index[p]).collect();
        Ok(Materialized { coords, points, maxima })
    }
}

pub struct Materialized {
    pub coords: Vec<(Coord, Coord)>,
    /// Rank-compressed integer coordinates with the same order type.
    pub points: Vec<Point>,
    /// In decreasing x.
    pub maxima: Vec<PointId>,
}

/// A comparison-based maxima algorithm driven by the adversary.
pub trait Adapter {
    fn name(&self) -> &'static str;
    /// Returns the announced maxima.
    fn run(&mut self, adv: &mut Adversary) -> Result<Vec<PointId>>;
}

struct AdvOracle<'a> {
    adv: &'a mut Adversary,
}

impl PointOracle for AdvOracle<'_> {
    type P = PointId;

    fn cmp_x(&mut self, a: &PointId, b: &PointId) -> Ordering {
        self.adv.answer(Axis::X, *a, *b)
    }

    fn cmp_y(&mut self, a: &PointId, b: &PointId) -> Ordering {
        self.adv.answer(Axis::Y, *a, *b)
    }
}

/// The seeded maxima algorithm over opaque handles.
pub struct MaximaAdapter {
    pub h0: u64,
    pub params: CostParams,
}

impl Default for MaximaAdapter {
    fn default() -> Self {
        MaximaAdapter { h0: 2, params: CostParams::new(1 << 16, 1 << 8).expect("valid parameters") }
    }
}

impl Adapter for MaximaAdapter {
    fn name(&self) -> &'static str {
        "maxima"
    }

    fn run(&mut self, adv: &mut Adversary) -> Result<Vec<PointId>> {
        let mut sim = Simulator::new(self.params);
        let items = (0..adv.n() as PointId).collect();
        let (out, _) = maxima_with(&mut sim, &mut AdvOracle { adv }, items, MaximaOpts::new(self.h0))?;
        Ok(out)
    }
}

/// Sort by x, then a running-maximum scan on y.
#[derive(Default)]
pub struct SortScanAdapter;

impl Adapter for SortScanAdapter {
    fn name(&self) -> &'static str {
        "sort"
    }

    fn run(&mut self, adv: &mut Adversary) -> Result<Vec<PointId>> {
        let mut ids: Vec<PointId> = (0..adv.n() as PointId).collect();
        ids.sort_by(|a, b| adv.answer(Axis::X, *b, *a));
        let mut out: Vec<PointId> = Vec::new();
        for p in ids {
            if out.last().is_none_or(|&best| adv.answer(Axis::Y, p, best) == Ordering::Greater) {
                out.push(p);
            }
        }
        Ok(out)
    }
}

/// Announces every point without looking.
#[derive(Default)]
pub struct ZeroAdapter;

impl Adapter for ZeroAdapter {
    fn name(&self) -> &'static str {
        "zero"
    }

    fn run(&mut self, adv: &mut Adversary) -> Result<Vec<PointId>> {
        Ok((0..adv.n() as PointId).collect())
    }
}

pub struct AdversaryReport {
    pub adapter: &'static str,
    pub announced: Vec<PointId>,
    pub maxima: Vec<PointId>,
    /// Announced set equals the maxima of the materialized points.
    pub correct: bool,
    pub comparisons: u64,
    pub epochs: Vec<EpochInfo>,
    pub top_nodes: SatInt,
    pub live_tops: usize,
    pub terminated_tops: usize,
    pub all_terminated: bool,
    pub budget_exceeded: bool,
    /// Total charge `Z`.
    pub total_charge: u64,
    /// `Z / (4B)`.
    pub forced_io: f64,
    pub violations: Vec<String>,
    pub transcript: Vec<Event>,
}

/// Drives `adapter` to completion and checks the run.
pub fn run_against(cfg: AdvConfig, adapter: &mut dyn Adapter) -> Result<AdversaryReport> {
    let mut adv = Adversary::new(cfg)?;
    let announced = adapter.run(&mut adv)?;
    adv.check_charges();
    let mat = adv.materialize()?;
    let chain = adv.materialize_with(Spread::Diagonal)?;
    let mut violations = adv.violations.clone();

    let sorted = |v: &[PointId]| {
        let mut v = v.to_vec();
        v.sort_unstable();
        v
    };
    let a = sorted(&announced);
    let m = sorted(&mat.maxima);
    // the answer must hold however the still-free points are placed
    let correct = a == m && a == sorted(&chain.maxima) && a.windows(2).all(|w| w[0] != w[1]);

    if adv.live_tops() > m.len() {
        violations.push(format!("{} top nodes but only {} maxima", adv.live_tops(), m.len()));
    }
    for (t, top) in adv.tops.iter().enumerate() {
        let Some(c) = top.corner.filter(|_| top.live && top.terminated) else {
            continue;
        };
        let inside: Vec<PointId> = adv.members[t].iter().copied().filter(|p| m.binary_search(p).is_ok()).collect();
        if inside != [c] {
            violations.push(format!("terminated node {} contributes maxima {inside:?}, expected [{c}]", top.node));
        }
    }

    let z = adv.total_charge();
    Ok(AdversaryReport {
        adapter: adapter.name(),
        announced,
        maxima: mat.maxima,
        correct,
        comparisons: adv.comparisons,
        top_nodes: adv.h,
        live_tops: adv.live_tops(),
        terminated_tops: adv.terminated_tops(),
        all_terminated: adv.all_terminated(),
        budget_exceeded: adv.budget_exceeded,
        total_charge: z,
        forced_io: z as f64 / (4 * adv.cfg.block) as f64,
        epochs: adv.epochs,
        violations,
        transcript: adv.events,
    })
}
