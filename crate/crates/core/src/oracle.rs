//! Classical simulator-free reference answers.

use crate::geom::{orient, Point};
use crate::maxima::dominates;

/// Maxima by a sort on x descending and a running-max-y scan, returned in
/// decreasing-x order. Exact duplicates of a maximum are reported once.
pub fn oracle_maxima(points: &[Point]) -> Vec<Point> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| b.cmp(a));
    pts.dedup();
    let mut out: Vec<Point> = Vec::new();
    for p in pts {
        if out.last().is_none_or(|q| p.y > q.y) {
            out.push(p);
        }
    }
    out
}

/// Quadratic all-pairs dominance filter, in decreasing-x order.
pub fn brute_force_maxima(points: &[Point]) -> Vec<Point> {
    let mut out: Vec<Point> = points
        .iter()
        .filter(|p| !points.iter().any(|q| dominates(q, p)))
        .copied()
        .collect();
    out.sort_by(|a, b| b.cmp(a));
    out.dedup();
    out
}

/// Upper hull left to right by Andrew's monotone chain, strictly convex.
pub fn andrew_upper(points: &[Point]) -> Vec<Point> {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    let mut up: Vec<Point> = Vec::new();
    for p in pts.into_iter().rev() {
        while up.len() >= 2 && orient(up[up.len() - 2], up[up.len() - 1], p) <= 0 {
            up.pop();
        }
        up.push(p);
    }
    up.reverse();
    // the chain from the top of the rightmost column to the top of the leftmost
    while up.len() >= 2 && up[0].x == up[1].x {
        up.remove(0);
    }
    while up.len() >= 2 && up[up.len() - 1].x == up[up.len() - 2].x {
        up.pop();
    }
    up
}

/// Convex hull in counter-clockwise order starting from the lowest of the
/// leftmost points, without collinear vertices.
pub fn oracle_hull(points: &[Point]) -> Vec<Point> {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let mut hull: Vec<Point> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Point>> =
            if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
        for &p in iter {
            while hull.len() >= start + 2 && orient(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p(x: i64, y: i64) -> Point {
        Point::new(x, y)
    }

    #[test]
    fn five_point_maxima() {
        let pts = [p(1, 5), p(2, 3), p(3, 4), p(4, 1), p(5, 2)];
        assert_eq!(oracle_maxima(&pts), vec![p(5, 2), p(3, 4), p(1, 5)]);
    }

    #[test]
    fn dominance_semantics() {
        assert!(dominates(&p(2, 5), &p(1, 5)));
        assert!(!dominates(&p(1, 5), &p(2, 3)));
        assert!(!dominates(&p(1, 5), &p(1, 5)));
    }

    #[test]
    fn hull_small_cases() {
        assert_eq!(oracle_hull(&[p(0, 0), p(1, 1), p(2, 2), p(1, 1)]), vec![p(0, 0), p(2, 2)]);
        assert_eq!(oracle_hull(&[p(0, 0), p(2, 0), p(1, 3)]), vec![p(0, 0), p(2, 0), p(1, 3)]);
        let sq = [p(0, 0), p(2, 0), p(2, 2), p(0, 2), p(1, 1), p(1, 0)];
        assert_eq!(oracle_hull(&sq), vec![p(0, 0), p(2, 0), p(2, 2), p(0, 2)]);
        assert_eq!(andrew_upper(&sq), vec![p(0, 2), p(2, 2)]);
        assert_eq!(oracle_hull(&[p(4, 4)]), vec![p(4, 4)]);
    }

    #[test]
    fn maxima_oracles_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..300 {
            let n = rng.random_range(1..=512);
            let r = rng.random_range(1..40);
            let pts: Vec<Point> = (0..n).map(|_| p(rng.random_range(-r..r), rng.random_range(-r..r))).collect();
            assert_eq!(oracle_maxima(&pts), brute_force_maxima(&pts));
        }
    }

    #[test]
    fn upper_hull_is_part_of_full_hull() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..200 {
            let n = rng.random_range(1..100);
            let pts: Vec<Point> = (0..n).map(|_| p(rng.random_range(-9..9), rng.random_range(-9..9))).collect();
            let full = oracle_hull(&pts);
            let up = andrew_upper(&pts);
            assert!(up.iter().all(|v| full.contains(v)));
            // nothing lies strictly above the upper chain
            for q in &pts {
                for w in up.windows(2) {
                    if w[0].x <= q.x && q.x <= w[1].x {
                        assert!(orient(w[0], w[1], *q) <= 0);
                    }
                }
            }
        }
    }
}
