//! Stack-based Graham scan for the upper hull.

use std::ops::Range;

use super::{orient, Point};
use crate::iosim::{SimArray, Simulator};

/// In-place upper hull of `range`, which must be sorted by `(x, y)`.
/// Only the topmost point of each x-column can survive, collinear interior
/// points are dropped, and duplicates collapse. The chain, left to right,
/// ends up in `range.start..range.start + len`; `len` is returned.
pub fn graham_upper_hull(sim: &mut Simulator, arr: &mut SimArray<Point>, range: Range<usize>) -> usize {
    let lo = range.start;
    let mut top = 0usize;
    for i in range {
        let p = arr.read(sim, i);
        if top > 0 {
            let last = arr.read(sim, lo + top - 1);
            sim.count_comparison();
            if last.x == p.x {
                top -= 1;
            }
        }
        while top >= 2 {
            let a = arr.read(sim, lo + top - 2);
            let b = arr.read(sim, lo + top - 1);
            sim.count_comparison();
            if orient(a, b, p) < 0 {
                break;
            }
            top -= 1;
        }
        arr.write(sim, lo + top, p);
        top += 1;
    }
    top
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::CostParams;
    use crate::oracle::andrew_upper;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn hull(mut pts: Vec<Point>) -> Vec<Point> {
        pts.sort();
        let mut s = Simulator::new(CostParams::new(1 << 10, 16).unwrap());
        let n = pts.len();
        let mut a = SimArray::from_vec(&mut s, pts);
        let len = graham_upper_hull(&mut s, &mut a, 0..n);
        a.into_vec(&mut s)[..len].to_vec()
    }

    #[test]
    fn examples() {
        let p = Point::new;
        assert_eq!(hull(vec![p(0, 0), p(1, 5), p(2, 0)]), vec![p(0, 0), p(1, 5), p(2, 0)]);
        assert_eq!(hull(vec![p(0, 0), p(1, 1), p(2, 2)]), vec![p(0, 0), p(2, 2)]);
        assert_eq!(hull(vec![p(0, 0), p(0, 5), p(1, 0), p(1, 0)]), vec![p(0, 5), p(1, 0)]);
        assert_eq!(hull(vec![p(3, 3), p(3, 3)]), vec![p(3, 3)]);
    }

    #[test]
    fn matches_monotone_chain() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let pts: Vec<Point> = (0..256).map(|_| Point::new(rng.random_range(-50..50), rng.random_range(-50..50))).collect();
            assert_eq!(hull(pts.clone()), andrew_upper(&pts));
        }
    }
}
