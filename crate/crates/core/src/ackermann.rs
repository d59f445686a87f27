//! Ackermann-like hierarchy `A_0(N) = N`, `A_1(N) = 2^N`,
//! `A_{i+1}(N) = A_i^{(N+1)}(N)` and its two inverses.
//!
//! Every value lives in a [`SatInt`]: anything above `2^63 - 1` collapses to
//! [`SatInt::INF`], which is all the callers need since only threshold
//! behaviour of these functions is ever observed.

use std::cmp::Ordering;
use std::fmt;

const CAP: u64 = i64::MAX as u64;

/// Saturating non-negative integer with an absorbing infinity.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct SatInt(u64);

impl SatInt {
    pub const INF: SatInt = SatInt(u64::MAX);
    pub const ZERO: SatInt = SatInt(0);
    pub const ONE: SatInt = SatInt(1);

    pub fn new(v: u64) -> Self {
        if v > CAP {
            Self::INF
        } else {
            SatInt(v)
        }
    }

    pub fn is_inf(self) -> bool {
        self.0 == u64::MAX
    }

    pub fn finite(self) -> Option<u64> {
        (!self.is_inf()).then_some(self.0)
    }

    /// Finite value, panicking on `INF`.
    pub fn get(self) -> u64 {
        self.finite().expect("SatInt::get on INF")
    }

    pub fn add(self, o: SatInt) -> SatInt {
        match (self.finite(), o.finite()) {
            (Some(a), Some(b)) => a.checked_add(b).map_or(Self::INF, Self::new),
            _ => Self::INF,
        }
    }

    /// Subtraction floored at zero. `INF - x` stays `INF` for finite `x`.
    pub fn saturating_sub(self, o: SatInt) -> SatInt {
        match (self.finite(), o.finite()) {
            (Some(a), Some(b)) => SatInt(a.saturating_sub(b)),
            (None, Some(_)) => Self::INF,
            (_, None) => Self::ZERO,
        }
    }

    pub fn mul(self, o: SatInt) -> SatInt {
        match (self.finite(), o.finite()) {
            (Some(0), _) | (_, Some(0)) => Self::ZERO,
            (Some(a), Some(b)) => a.checked_mul(b).map_or(Self::INF, Self::new),
            _ => Self::INF,
        }
    }

    /// `2^self`.
    pub fn pow2(self) -> SatInt {
        match self.finite() {
            Some(e) if e < 63 => SatInt(1u64 << e),
            _ => Self::INF,
        }
    }
}

impl From<u64> for SatInt {
    fn from(v: u64) -> Self {
        SatInt::new(v)
    }
}

impl PartialOrd for SatInt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SatInt {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.cmp(&other.0)
    }
}

impl fmt::Debug for SatInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for SatInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.finite() {
            Some(v) => write!(f, "{v}"),
            None => f.write_str("inf"),
        }
    }
}

/// `A_i(N)` for `N >= 1`. `N = 0` follows the inverse convention: `A_0(0) = 0`
/// and `A_i(0) = 1` for `i >= 1`.
pub fn ack(level: u32, n: SatInt) -> SatInt {
    if n.is_inf() {
        return SatInt::INF;
    }
    match (level, n.get()) {
        (0, _) => n,
        (_, 0) => SatInt::ONE,
        (1, _) => n.pow2(),
        (_, v) => {
            // each application of A_{i-1} (i-1 >= 1) at least doubles, so this
            // loop saturates within ~64 rounds regardless of v
            let mut x = n;
            for _ in 0..=v {
                x = ack(level - 1, x);
                if x.is_inf() {
                    break;
                }
            }
            x
        }
    }
}

/// `lambda_i(x)`: the smallest `N >= 0` with `A_i(N) >= x`.
pub fn lambda_inv(level: u32, x: u64) -> u64 {
    assert!(x >= 1, "lambda_inv needs x >= 1");
    if level == 0 {
        return x;
    }
    let target = SatInt::new(x);
    let mut n = 0u64;
    while ack(level, SatInt::new(n)) < target {
        n += 1;
    }
    n
}

/// `alpha_N(x)`: the smallest level `i` with `A_i(N) >= x`.
pub fn alpha_inv(n: u64, x: u64) -> u32 {
    assert!(n >= 1 && x >= 1, "alpha_inv needs N >= 1 and x >= 1");
    let target = SatInt::new(x);
    let mut i = 0;
    while ack(i, SatInt::new(n)) < target {
        i += 1;
    }
    i
}

/// `f^{(t)}(x)`, stopping early once the value saturates.
pub fn iterate(f: impl Fn(SatInt) -> SatInt, x: SatInt, times: SatInt) -> SatInt {
    let mut x = x;
    let mut left = times;
    while left > SatInt::ZERO {
        if x.is_inf() {
            return x;
        }
        x = f(x);
        left = left.saturating_sub(SatInt::ONE);
    }
    x
}
