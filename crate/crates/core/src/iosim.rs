//! Instrumented external-memory simulator.
//!
//! Algorithms keep their data in [`SimArray`]s and touch it only through
//! [`SimArray::read`] / [`SimArray::write`]. Every touched word is mapped to
//! its `B`-word block and pushed through a fully associative LRU cache of
//! `m = M / B` lines; a miss costs one I/O. Control state held in ordinary
//! locals is free, as in the usual EM accounting.

use std::collections::BTreeMap;
use std::marker::PhantomData;

use serde::Serialize;

use crate::cost::CostParams;

/// Something that can be stored in a simulated array.
pub trait Element: Copy {
    /// Width in machine words.
    const WORDS: u64;
}

macro_rules! scalar_element {
    ($($t:ty),*) => { $(impl Element for $t { const WORDS: u64 = 1; })* };
}
scalar_element!(i64, u64, u32, i32, usize);

/// Counters accumulated by a [`Simulator`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CostReport {
    pub io_count: u64,
    pub comparisons: u64,
    pub reads: u64,
    pub writes: u64,
    pub distinct_blocks: u64,
}

impl CostReport {
    pub const CSV_HEADER: [&'static str; 5] = ["io_count", "comparisons", "reads", "writes", "distinct_blocks"];

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.io_count, self.comparisons, self.reads, self.writes, self.distinct_blocks
        )
    }
}

const NIL: u32 = u32::MAX;

/// O(1) LRU over dense block ids: an intrusive doubly linked list in slot
/// vectors plus a block -> slot table.
#[derive(Debug)]
struct Lru {
    capacity: usize,
    slot_of: Vec<u32>,
    block: Vec<u64>,
    prev: Vec<u32>,
    next: Vec<u32>,
    head: u32,
    tail: u32,
}

impl Lru {
    fn new(capacity: usize) -> Self {
        Lru {
            capacity,
            slot_of: Vec::new(),
            block: Vec::with_capacity(capacity),
            prev: Vec::with_capacity(capacity),
            next: Vec::with_capacity(capacity),
            head: NIL,
            tail: NIL,
        }
    }

    fn len(&self) -> usize {
        self.block.len()
    }

    fn unlink(&mut self, s: u32) {
        let (p, n) = (self.prev[s as usize], self.next[s as usize]);
        if p != NIL {
            self.next[p as usize] = n;
        } else {
            self.head = n;
        }
        if n != NIL {
            self.prev[n as usize] = p;
        } else {
            self.tail = p;
        }
    }

    fn push_front(&mut self, s: u32) {
        self.prev[s as usize] = NIL;
        self.next[s as usize] = self.head;
        if self.head != NIL {
            self.prev[self.head as usize] = s;
        }
        self.head = s;
        if self.tail == NIL {
            self.tail = s;
        }
    }

    /// Returns true on a miss.
    fn access(&mut self, block: u64) -> bool {
        let b = block as usize;
        if b >= self.slot_of.len() {
            self.slot_of.resize(b + 1, NIL);
        }
        let s = self.slot_of[b];
        if s != NIL {
            if self.head != s {
                self.unlink(s);
                self.push_front(s);
            }
            return false;
        }
        let s = if self.len() < self.capacity {
            self.block.push(block);
            self.prev.push(NIL);
            self.next.push(NIL);
            (self.block.len() - 1) as u32
        } else {
            let victim = self.tail;
            self.unlink(victim);
            self.slot_of[self.block[victim as usize] as usize] = NIL;
            self.block[victim as usize] = block;
            victim
        };
        self.slot_of[b] = s;
        self.push_front(s);
        true
    }

    fn resident(&self) -> impl Iterator<Item = u64> + '_ {
        let mut cur = self.head;
        std::iter::from_fn(move || {
            (cur != NIL).then(|| {
                let b = self.block[cur as usize];
                cur = self.next[cur as usize];
                b
            })
        })
    }
}

/// Word-address allocator: first fit over freed ranges, bump otherwise.
/// Every range is rounded up to whole blocks so arrays never share a block.
#[derive(Debug, Default)]
struct Allocator {
    top: u64,
    free: BTreeMap<u64, u64>,
    live: BTreeMap<u64, u64>,
}

impl Allocator {
    fn alloc(&mut self, words: u64) -> u64 {
        let fit = self.free.iter().find(|(_, &len)| len >= words).map(|(&s, &l)| (s, l));
        let base = match fit {
            Some((start, len)) => {
                self.free.remove(&start);
                if len > words {
                    self.free.insert(start + words, len - words);
                }
                start
            }
            None => {
                let b = self.top;
                self.top += words;
                b
            }
        };
        self.live.insert(base, words);
        base
    }

    fn release(&mut self, base: u64) {
        let Some(mut len) = self.live.remove(&base) else {
            panic!("release of unknown range at word {base}");
        };
        let mut start = base;
        if let Some((&ps, &pl)) = self.free.range(..start).next_back() {
            if ps + pl == start {
                self.free.remove(&ps);
                start = ps;
                len += pl;
            }
        }
        if let Some(&nl) = self.free.get(&(start + len)) {
            self.free.remove(&(start + len));
            len += nl;
        }
        if start + len == self.top {
            self.top = start;
        } else {
            self.free.insert(start, len);
        }
    }

    fn live_ranges_disjoint(&self) -> bool {
        self.live.iter().zip(self.live.iter().skip(1)).all(|((&s, &l), (&t, _))| s + l <= t)
    }
}

/// One simulated two-level memory. Single-threaded; independent instances
/// may live on different threads.
#[derive(Debug)]
pub struct Simulator {
    params: CostParams,
    lru: Lru,
    alloc: Allocator,
    seen: Vec<u64>,
    last_block: u64,
    report: CostReport,
}

impl Simulator {
    pub fn new(params: CostParams) -> Self {
        Simulator {
            params,
            lru: Lru::new(params.lines() as usize),
            alloc: Allocator::default(),
            seen: Vec::new(),
            last_block: u64::MAX,
            report: CostReport::default(),
        }
    }

    pub fn params(&self) -> &CostParams {
        &self.params
    }

    pub fn snapshot(&self) -> CostReport {
        self.report
    }

    /// Records one predicate evaluation on simulated data.
    #[inline]
    pub fn count_comparison(&mut self) {
        self.report.comparisons += 1;
    }

    #[inline]
    fn touch_block(&mut self, block: u64) {
        if block == self.last_block {
            return;
        }
        self.last_block = block;
        let (w, bit) = ((block / 64) as usize, block % 64);
        if w >= self.seen.len() {
            self.seen.resize(w + 1, 0);
        }
        if self.seen[w] & (1 << bit) == 0 {
            self.seen[w] |= 1 << bit;
            self.report.distinct_blocks += 1;
        }
        if self.lru.access(block) {
            self.report.io_count += 1;
        }
    }

    /// Touches `words` consecutive words starting at word address `addr`.
    #[inline]
    pub fn touch(&mut self, addr: u64, words: u64) {
        let b = self.params.block();
        let (first, last) = (addr / b, (addr + words - 1) / b);
        for block in first..=last {
            self.touch_block(block);
        }
    }

    /// Blocks currently cached, most recently used first.
    pub fn resident_blocks(&self) -> Vec<u64> {
        self.lru.resident().collect()
    }

    fn reserve(&mut self, words: u64) -> u64 {
        let b = self.params.block();
        let rounded = words.max(1).div_ceil(b) * b;
        let base = self.alloc.alloc(rounded);
        debug_assert!(self.alloc.live_ranges_disjoint());
        base
    }

    pub fn live_ranges_disjoint(&self) -> bool {
        self.alloc.live_ranges_disjoint()
    }
}

/// Array whose every element access is charged to a [`Simulator`].
#[derive(Debug)]
pub struct SimArray<T: Element> {
    base: u64,
    data: Vec<T>,
    _t: PhantomData<T>,
}

impl<T: Element> SimArray<T> {
    /// A fresh array of `len` copies of `fill`. Initialisation is free: it
    /// models memory that already holds the value.
    pub fn alloc(sim: &mut Simulator, len: usize, fill: T) -> Self {
        Self::from_vec(sim, vec![fill; len])
    }

    /// Places existing data (typically the problem input) in simulated
    /// memory without charging for it.
    pub fn from_vec(sim: &mut Simulator, data: Vec<T>) -> Self {
        let base = sim.reserve(data.len() as u64 * T::WORDS);
        SimArray { base, data, _t: PhantomData }
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// First word address.
    pub fn base(&self) -> u64 {
        self.base
    }

    #[inline]
    pub fn read(&self, sim: &mut Simulator, i: usize) -> T {
        let v = self.data[i];
        sim.touch(self.base + i as u64 * T::WORDS, T::WORDS);
        sim.report.reads += 1;
        v
    }

    #[inline]
    pub fn write(&mut self, sim: &mut Simulator, i: usize, v: T) {
        assert!(i < self.data.len(), "index {i} out of bounds for SimArray of {}", self.data.len());
        sim.touch(self.base + i as u64 * T::WORDS, T::WORDS);
        sim.report.writes += 1;
        self.data[i] = v;
    }

    #[inline]
    pub fn swap(&mut self, sim: &mut Simulator, i: usize, j: usize) {
        if i == j {
            return;
        }
        let (a, b) = (self.read(sim, i), self.read(sim, j));
        self.write(sim, i, b);
        self.write(sim, j, a);
    }

    /// Uncharged view, for results and assertions outside the measured run.
    pub fn peek(&self) -> &[T] {
        &self.data
    }

    pub fn into_vec(self, sim: &mut Simulator) -> Vec<T> {
        sim.alloc.release(self.base);
        self.data
    }

    pub fn free(self, sim: &mut Simulator) {
        sim.alloc.release(self.base);
    }
}
