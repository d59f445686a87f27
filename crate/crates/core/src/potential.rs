//! Status vectors and the potential function `Phi` that bounds how many top
//! nodes the lower-bound adversary can ever be forced to create, together
//! with an exhaustive game search used as an independent check of it.

use std::collections::HashMap;

use crate::ackermann::{ack, iterate, SatInt};
use crate::error::{Error, Result};

/// A strictly increasing function on saturating integers.
pub trait Growth {
    fn apply(&self, x: SatInt) -> SatInt;

    /// `self^{(times)}(x)`.
    fn iterate(&self, x: SatInt, times: SatInt) -> SatInt {
        iterate(|v| self.apply(v), x, times)
    }
}

impl<F: Fn(SatInt) -> SatInt> Growth for F {
    fn apply(&self, x: SatInt) -> SatInt {
        self(x)
    }
}

/// The surrogates used for desk-scale checks, and the hierarchy itself.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GrowthFn {
    /// `x + c`, `c >= 1`.
    Add(u64),
    /// `c * x`, `c >= 2`.
    Scale(u64),
    /// `A_i(x)`, `i >= 1`.
    Ack(u32),
}

impl Growth for GrowthFn {
    fn apply(&self, x: SatInt) -> SatInt {
        match *self {
            GrowthFn::Add(c) => x.add(SatInt::new(c)),
            GrowthFn::Scale(c) => x.mul(SatInt::new(c)),
            GrowthFn::Ack(i) => ack(i, x),
        }
    }

    fn iterate(&self, x: SatInt, times: SatInt) -> SatInt {
        match *self {
            GrowthFn::Add(c) => x.add(SatInt::new(c).mul(times)),
            _ => iterate(|v| self.apply(v), x, times),
        }
    }
}

/// `t` top nodes whose points sit `kappa` charges below termination.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub t: SatInt,
    pub kappa: u32,
}

impl Term {
    pub fn new(t: u64, kappa: u32) -> Self {
        Term { t: SatInt::new(t), kappa }
    }
}

/// `(h; (t_1, k_1), (t_2, k_2), ...)` with `k` nondecreasing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StatusVector {
    pub h: SatInt,
    pub seq: Vec<Term>,
}

impl StatusVector {
    pub fn new(h: u64, seq: &[(u64, u32)]) -> Self {
        StatusVector {
            h: SatInt::new(h),
            seq: seq.iter().map(|&(t, k)| Term::new(t, k)).collect(),
        }
    }

    pub fn is_well_formed(&self) -> bool {
        self.h >= SatInt::ONE
            && self.seq.iter().all(|term| term.kappa >= 1)
            && self.seq.windows(2).all(|w| w[0].kappa <= w[1].kappa)
    }

    pub fn total_nodes(&self) -> SatInt {
        self.seq.iter().fold(SatInt::ZERO, |acc, term| acc.add(term.t))
    }
}

/// `Phi(h; ())          = h`
/// `Phi(h; (0,k), S)    = Phi(h; S)`
/// `Phi(h; (t,1), S)    = Phi(A(h); (t-1,1), S)`
/// `Phi(h; (t,k), S)    = Phi(A(h); (A(h),k-1), (t-1,k), S)`   for `k > 1`
///
/// The `k = 1` branch is unrolled into a single `A^{(t)}` so that huge counts
/// under slowly growing surrogates stay cheap.
pub fn phi(v: &StatusVector, a: &impl Growth) -> SatInt {
    debug_assert!(v.is_well_formed(), "malformed status vector {v:?}");
    let mut h = v.h;
    // front of the sequence is the back of the stack
    let mut stack: Vec<Term> = v.seq.iter().rev().copied().collect();
    while let Some(term) = stack.pop() {
        if h.is_inf() {
            return h;
        }
        if term.t == SatInt::ZERO {
            continue;
        }
        if term.kappa == 1 {
            h = a.iterate(h, term.t);
            continue;
        }
        let ah = a.apply(h);
        h = ah;
        stack.push(Term { t: term.t.saturating_sub(SatInt::ONE), kappa: term.kappa });
        stack.push(Term { t: ah, kappa: term.kappa - 1 });
    }
    h
}

/// Limits for [`game_max_bruteforce`].
#[derive(Clone, Copy, Debug)]
pub struct GameBounds {
    /// States expanded, which also bounds the search depth.
    pub max_states: usize,
    /// Largest number of unresolved nodes or value of `h` tolerated.
    pub max_value: u64,
}

impl Default for GameBounds {
    fn default() -> Self {
        GameBounds { max_states: 10_000, max_value: 1 << 20 }
    }
}

/// Plays every resolution order of the status-vector game and returns the
/// largest top-node count reachable. Resolving a node of potential `k` while
/// `h` top nodes exist leaves `A(h)` top nodes, and for `k > 1` the resolved
/// node spawns `A(h)` fresh nodes of potential `k - 1`.
pub fn game_max_bruteforce(v: &StatusVector, a: &impl Growth, bounds: GameBounds) -> Result<u64> {
    let max_kappa = v.seq.iter().map(|term| term.kappa).max().unwrap_or(0) as usize;
    let mut counts = vec![0u64; max_kappa];
    for term in &v.seq {
        let t = term.t.finite().filter(|&t| t <= bounds.max_value).ok_or(Error::Explosion(0))?;
        counts[term.kappa as usize - 1] += t;
    }
    let h = v.h.finite().ok_or(Error::Explosion(0))?;
    let mut memo = HashMap::new();
    let mut expanded = 0;
    explore(h, &mut counts, a, bounds, &mut memo, &mut expanded)
}

fn explore(
    h: u64,
    counts: &mut Vec<u64>,
    a: &impl Growth,
    bounds: GameBounds,
    memo: &mut HashMap<(u64, Vec<u64>), u64>,
    expanded: &mut usize,
) -> Result<u64> {
    if let Some(&best) = memo.get(&(h, counts.clone())) {
        return Ok(best);
    }
    // only potential-one nodes left: they are interchangeable, so there is a
    // single line of play
    if counts.iter().skip(1).all(|&c| c == 0) {
        let mut h = h;
        for _ in 0..counts.first().copied().unwrap_or(0) {
            h = a.apply(SatInt::new(h)).finite().filter(|&x| x <= bounds.max_value).ok_or(Error::Explosion(memo.len()))?;
        }
        return Ok(h);
    }
    *expanded += 1;
    if *expanded > bounds.max_states {
        return Err(Error::Explosion(bounds.max_states));
    }
    let mut best = h;
    for k in 0..counts.len() {
        if counts[k] == 0 {
            continue;
        }
        let next = a
            .apply(SatInt::new(h))
            .finite()
            .filter(|&x| x <= bounds.max_value)
            .ok_or(Error::Explosion(memo.len()))?;
        counts[k] -= 1;
        if k > 0 {
            counts[k - 1] += next;
            if counts[k - 1] > bounds.max_value {
                return Err(Error::Explosion(memo.len()));
            }
        }
        let r = explore(next, counts, a, bounds, memo, expanded);
        if k > 0 {
            counts[k - 1] -= next;
        }
        counts[k] += 1;
        best = best.max(r?);
    }
    memo.insert((h, counts.clone()), best);
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: u64) -> SatInt {
        SatInt::new(v)
    }

    #[test]
    fn phi_base_and_zero_terms() {
        let a = GrowthFn::Add(1);
        assert_eq!(phi(&StatusVector::new(5, &[]), &a), s(5));
        let with_zero = StatusVector::new(3, &[(0, 1), (2, 2)]);
        assert_eq!(phi(&with_zero, &a), phi(&StatusVector::new(3, &[(2, 2)]), &a));
    }

    #[test]
    fn phi_unit_potential_iterates() {
        assert_eq!(phi(&StatusVector::new(3, &[(4, 1)]), &GrowthFn::Add(1)), s(7));
        assert_eq!(phi(&StatusVector::new(3, &[(4, 1)]), &GrowthFn::Scale(2)), s(48));
    }

    #[test]
    fn phi_by_hand_kappa_two() {
        // Phi(1; (1,2)) with x+1: Phi(2; (2,1), (0,2)) = 4
        assert_eq!(phi(&StatusVector::new(1, &[(1, 2)]), &GrowthFn::Add(1)), s(4));
        // with 2x: Phi(2; (2,1)) = 8
        assert_eq!(phi(&StatusVector::new(1, &[(1, 2)]), &GrowthFn::Scale(2)), s(8));
    }

    #[test]
    fn closures_are_growth() {
        let a = |x: SatInt| x.add(SatInt::new(2));
        assert_eq!(phi(&StatusVector::new(1, &[(3, 1)]), &a), s(7));
    }

    #[test]
    fn game_examples() {
        let a = GrowthFn::Add(1);
        let b = GameBounds::default();
        assert_eq!(game_max_bruteforce(&StatusVector::new(1, &[(1, 1)]), &a, b).unwrap(), 2);
        assert_eq!(game_max_bruteforce(&StatusVector::new(1, &[]), &a, b).unwrap(), 1);
        let v = StatusVector::new(1, &[(1, 2)]);
        assert_eq!(s(game_max_bruteforce(&v, &a, b).unwrap()), phi(&v, &a));
    }

    #[test]
    fn game_guard_trips() {
        let v = StatusVector::new(3, &[(6, 4)]);
        let r = game_max_bruteforce(&v, &GrowthFn::Scale(2), GameBounds::default());
        assert!(matches!(r, Err(Error::Explosion(_))));
    }

    #[test]
    fn well_formedness() {
        assert!(StatusVector::new(1, &[(1, 1), (2, 3)]).is_well_formed());
        assert!(!StatusVector::new(1, &[(1, 3), (2, 1)]).is_well_formed());
        assert!(!StatusVector::new(0, &[]).is_well_formed());
    }
}
