//! Exact integer geometry and the external-memory building blocks the
//! output-sensitive algorithms are assembled from.

mod distribute;
mod extremes;
mod scan;
mod select;
mod sort;

use std::cmp::Ordering;
use std::fmt;
use std::io::{BufRead, Write};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::iosim::Element;

pub use distribute::{distribute, BucketLayout};
pub use extremes::{multi_slope_extremes, slope_extremes_scan, Extremes};
pub use scan::graham_upper_hull;
pub use select::select_rank;
pub use sort::mergesort;

/// Largest admissible absolute coordinate. Every degree-two predicate on
/// such points is evaluated exactly in `i128`.
pub const COORD_LIMIT: i64 = 1 << 26;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Point {
    pub x: i64,
    pub y: i64,
}

impl Element for Point {
    const WORDS: u64 = 2;
}

impl Point {
    pub const fn new(x: i64, y: i64) -> Self {
        Point { x, y }
    }

    pub fn checked(x: i64, y: i64) -> Result<Self> {
        for c in [x, y] {
            if !(-COORD_LIMIT..=COORD_LIMIT).contains(&c) {
                return Err(Error::CoordinateOutOfRange(c));
            }
        }
        Ok(Point { x, y })
    }

    pub fn neg(self) -> Self {
        Point::new(-self.x, -self.y)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.x, self.y)
    }
}

/// Lexicographic `(x, y)` order.
#[inline]
pub fn lex(a: &Point, b: &Point) -> Ordering {
    a.x.cmp(&b.x).then(a.y.cmp(&b.y))
}

/// Sign of `(q - p) x (r - p)`: `+1` for a left turn, `-1` for a right turn.
#[inline]
pub fn orient(p: Point, q: Point, r: Point) -> i32 {
    let ax = (q.x - p.x) as i128;
    let ay = (q.y - p.y) as i128;
    let bx = (r.x - p.x) as i128;
    let by = (r.y - p.y) as i128;
    match (ax * by - ay * bx).cmp(&0) {
        Ordering::Greater => 1,
        Ordering::Equal => 0,
        Ordering::Less => -1,
    }
}

/// Slope `dy/dx` with `dx > 0`, or vertical. Vertical is the largest slope.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SlopeRat {
    Finite { dy: i64, dx: i64 },
    Vertical,
}

impl Element for SlopeRat {
    const WORDS: u64 = 2;
}

impl SlopeRat {
    pub fn new(dy: i64, dx: i64) -> Self {
        match dx.cmp(&0) {
            Ordering::Greater => SlopeRat::Finite { dy, dx },
            Ordering::Less => SlopeRat::Finite { dy: -dy, dx: -dx },
            Ordering::Equal => SlopeRat::Vertical,
        }
    }

    /// Slope of the segment through two points.
    pub fn through(a: Point, b: Point) -> Self {
        SlopeRat::new(b.y - a.y, b.x - a.x)
    }

    /// `y - s x` of `p` compared with that of `q`. Undefined for vertical.
    #[inline]
    pub fn cmp_offset(&self, p: &Point, q: &Point) -> Ordering {
        match *self {
            SlopeRat::Finite { dy, dx } => {
                let vp = p.y as i128 * dx as i128 - dy as i128 * p.x as i128;
                let vq = q.y as i128 * dx as i128 - dy as i128 * q.x as i128;
                vp.cmp(&vq)
            }
            SlopeRat::Vertical => q.x.cmp(&p.x),
        }
    }
}

impl PartialOrd for SlopeRat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SlopeRat {
    fn cmp(&self, other: &Self) -> Ordering {
        match (*self, *other) {
            (SlopeRat::Vertical, SlopeRat::Vertical) => Ordering::Equal,
            (SlopeRat::Vertical, _) => Ordering::Greater,
            (_, SlopeRat::Vertical) => Ordering::Less,
            (SlopeRat::Finite { dy: a, dx: b }, SlopeRat::Finite { dy: c, dx: d }) => {
                (a as i128 * d as i128).cmp(&(c as i128 * b as i128))
            }
        }
    }
}

/// Reads the point text format: one `x y` pair per line, signed decimal
/// integers; blank lines and `#` comments are skipped.
pub fn read_points(input: impl BufRead) -> Result<Vec<Point>> {
    let mut out = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let bad = |msg: &str| Error::Parse { line: i + 1, msg: msg.to_string() };
        let mut it = body.split_whitespace();
        let (Some(xs), Some(ys), None) = (it.next(), it.next(), it.next()) else {
            return Err(bad("expected two integers"));
        };
        let x = xs.parse::<i64>().map_err(|e| bad(&e.to_string()))?;
        let y = ys.parse::<i64>().map_err(|e| bad(&e.to_string()))?;
        out.push(Point::checked(x, y).map_err(|e| bad(&e.to_string()))?);
    }
    Ok(out)
}

/// Writes points in the text format, preceded by optional `#` header lines.
pub fn write_points(mut out: impl Write, header: &[String], points: &[Point]) -> Result<()> {
    for h in header {
        writeln!(out, "# {h}")?;
    }
    for p in points {
        writeln!(out, "{p}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn orientation_examples() {
        let p = Point::new;
        assert_eq!(orient(p(0, 0), p(1, 0), p(0, 1)), 1);
        assert_eq!(orient(p(0, 0), p(1, 1), p(2, 2)), 0);
        assert_eq!(orient(p(0, 0), p(1, 0), p(2, -1)), -1);
    }

    #[test]
    fn slope_order() {
        let s = SlopeRat::new;
        assert!(s(1, 2) < s(1, 1));
        assert_eq!(s(2, 4), s(1, 2).max(s(2, 4)));
        assert_eq!(s(2, 4).cmp(&s(1, 2)), Ordering::Equal);
        assert_eq!(s(1, -2), SlopeRat::Finite { dy: -1, dx: 2 });
        assert!(s(1, 0) > s(i64::from(COORD_LIMIT as i32), 1));
        assert_eq!(SlopeRat::through(Point::new(0, 0), Point::new(0, 5)), SlopeRat::Vertical);
    }

    #[test]
    fn text_format() {
        let text = "# header\n1 2\n\n  -3   4  # trailing\n";
        let pts = read_points(text.as_bytes()).unwrap();
        assert_eq!(pts, vec![Point::new(1, 2), Point::new(-3, 4)]);
        assert!(read_points("1\n".as_bytes()).is_err());
        assert!(read_points("1 2 3\n".as_bytes()).is_err());
        assert!(read_points("99999999999 0\n".as_bytes()).is_err());
        let mut buf = Vec::new();
        write_points(&mut buf, &["h".into()], &pts).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "# h\n1 2\n-3 4\n");
    }

    proptest::proptest! {
        #[test]
        fn orient_matches_bigint(c in proptest::array::uniform6(-COORD_LIMIT..=COORD_LIMIT)) {
            let (p, q, r) = (Point::new(c[0], c[1]), Point::new(c[2], c[3]), Point::new(c[4], c[5]));
            let big = |v: i64| BigInt::from(v);
            let det = (big(q.x) - big(p.x)) * (big(r.y) - big(p.y)) - (big(q.y) - big(p.y)) * (big(r.x) - big(p.x));
            let sign = match det.sign() {
                num_bigint::Sign::Plus => 1,
                num_bigint::Sign::NoSign => 0,
                num_bigint::Sign::Minus => -1,
            };
            proptest::prop_assert_eq!(orient(p, q, r), sign);
        }

        #[test]
        fn slope_cmp_matches_bigint(a in -COORD_LIMIT..=COORD_LIMIT, b in 1..=COORD_LIMIT, c in -COORD_LIMIT..=COORD_LIMIT, d in 1..=COORD_LIMIT) {
            let lhs = BigInt::from(a) * BigInt::from(d);
            let rhs = BigInt::from(c) * BigInt::from(b);
            proptest::prop_assert_eq!(SlopeRat::new(a, b).cmp(&SlopeRat::new(c, d)), lhs.cmp(&rhs));
        }
    }
}
