//! External-memory cost formulas: `Scan`, `Sort` and `Distr`, plus the
//! model bounds the harness reports next to measured I/O counts.

use crate::ackermann::alpha_inv;
use crate::error::{Error, Result};

/// Cache of `M` words split into blocks of `B` words.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CostParams {
    memory: u64,
    block: u64,
}

impl CostParams {
    pub fn new(memory: u64, block: u64) -> Result<Self> {
        if block == 0 {
            return Err(Error::InvalidParams("B must be at least 1".into()));
        }
        if !memory.is_multiple_of(block) {
            return Err(Error::InvalidParams(format!("M={memory} is not a multiple of B={block}")));
        }
        if memory < 2 * block {
            return Err(Error::InvalidParams(format!("M={memory} < 2B={}", 2 * block)));
        }
        Ok(CostParams { memory, block })
    }

    /// `M`, in words.
    pub fn memory(&self) -> u64 {
        self.memory
    }

    /// `B`, in words.
    pub fn block(&self) -> u64 {
        self.block
    }

    /// `m = M / B`, the number of cache lines.
    pub fn lines(&self) -> u64 {
        self.memory / self.block
    }

    /// `n = N / B`.
    pub fn blocks_of(&self, n: u64) -> f64 {
        n as f64 / self.block as f64
    }

    fn log_m(&self, x: f64) -> f64 {
        x.log2() / (self.lines() as f64).log2()
    }
}

pub fn scan_cost(n: u64, p: &CostParams) -> f64 {
    p.blocks_of(n)
}

/// `n log_m n`, never below a scan.
pub fn sort_cost(n: u64, p: &CostParams) -> f64 {
    let blocks = p.blocks_of(n);
    (blocks * p.log_m(blocks)).max(blocks)
}

/// `n * max{1, log_m k}`.
pub fn distr_cost(n: u64, k: u64, p: &CostParams) -> f64 {
    assert!(k >= 1, "distr_cost needs k >= 1");
    p.blocks_of(n) * p.log_m(k as f64).max(1.0)
}

/// The deterministic maxima I/O bound `n log_m(hH) + n alpha_h(min{H, m})`
/// with seed `h` and output size `H`. The logarithmic term is floored at one
/// scan, the same way `Distr` is.
pub fn maxima_io_bound(n: u64, output: u64, seed: u64, p: &CostParams) -> f64 {
    let blocks = p.blocks_of(n);
    let hh = (seed.max(1) * output.max(1)) as f64;
    let alpha = alpha_inv(seed.max(1), output.clamp(1, p.lines()));
    blocks * (p.log_m(hh).max(1.0) + alpha as f64)
}

/// Expected-I/O bound of the randomized variant: `n (log_m(H + 2) + 1)`.
pub fn randomized_io_bound(n: u64, output: u64, p: &CostParams) -> f64 {
    p.blocks_of(n) * (p.log_m((output + 2) as f64) + 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_validation() {
        let p = CostParams::new(4096, 64).unwrap();
        assert_eq!(p.lines(), 64);
        assert!(CostParams::new(64, 64).is_err());
        assert!(CostParams::new(100, 64).is_err());
        assert!(CostParams::new(16, 0).is_err());
        assert!(CostParams::new(2, 1).is_ok());
    }

    #[test]
    fn formula_examples() {
        let p = CostParams::new(4096, 64).unwrap();
        assert_eq!(scan_cost(1024, &p), 16.0);
        assert_eq!(distr_cost(1024, 64, &p), scan_cost(1024, &p));
        assert_eq!(distr_cost(1024, 3, &p), scan_cost(1024, &p));

        let p = CostParams::new(1 << 16, 1 << 8).unwrap();
        let d = distr_cost(1 << 20, 1 << 10, &p);
        assert!((d - 5120.0).abs() < 1e-9, "{d}");
    }

    #[test]
    fn sort_floor() {
        let p = CostParams::new(1 << 16, 1 << 8).unwrap();
        // n = 4 blocks, log_256 4 < 1
        assert_eq!(sort_cost(1024, &p), 4.0);
        let s = sort_cost(1 << 24, &p);
        assert!((s - 65536.0 * 2.0).abs() < 1e-6, "{s}");
    }

    #[test]
    fn concavity_of_distr() {
        // sum_i Distr(N, k_i) <= Distr(tN, k) - Distr(tN, t) for k_i > m, t >= m
        let p = CostParams::new(64, 8).unwrap();
        let m = p.lines();
        let n = 4096;
        for t in [m, m + 3, 2 * m] {
            let ks: Vec<u64> = (0..t).map(|i| m + 1 + (i * 37) % 500).collect();
            let k: u64 = ks.iter().sum();
            let lhs: f64 = ks.iter().map(|&ki| distr_cost(n, ki, &p)).sum();
            let rhs = distr_cost(t * n, k, &p) - distr_cost(t * n, t, &p);
            assert!(lhs <= rhs + 1e-9, "t={t}: {lhs} > {rhs}");
        }
    }
}
