//! Exact points, segments and trapezoids, plus the predicates the rest of
//! the crate is built on.
//!
//! "Left of" always means the lexicographic `(x, y)` order, which is the
//! same as comparing x after an infinitesimal shear `x' = x + εy`.

mod coord;

use std::cmp::Ordering;
use std::fmt;

use num_rational::BigRational;

use coord::SMALL_MAX;
pub use coord::{Coord, ParseCoordError};

pub type EdgeId = u32;
pub type ComponentId = u32;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: Coord,
    pub y: Coord,
}

impl Point {
    pub fn new(x: impl Into<Coord>, y: impl Into<Coord>) -> Point {
        Point { x: x.into(), y: y.into() }
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Left,
    Right,
    Collinear,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeomError {
    #[error("segment endpoints coincide at {0:?}")]
    Degenerate(Point),
}

/// Closed segment with `a` lexicographically before `b`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl fmt::Debug for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?} - {:?}]", self.a, self.b)
    }
}

/// Which side of a sheared vertical line a piece extends to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    L,
    R,
}

/// The coordinates times a common denominator, when every result stays
/// within the small-integer bound.
fn scaled<const N: usize>(cs: [&Coord; N]) -> Option<[i128; N]> {
    let mut out = [0i128; N];
    if cs.iter().all(|c| c.small().is_some()) {
        for (o, c) in out.iter_mut().zip(cs) {
            *o = c.small().unwrap() as i128;
        }
        return Some(out);
    }
    let mut ratios = [(0i64, 1i64); N];
    let mut den: i64 = 1;
    for (r, c) in ratios.iter_mut().zip(cs) {
        *r = c.small_ratio()?;
        den = num_integer::lcm(den, r.1);
        if den > SMALL_MAX {
            return None;
        }
    }
    for (o, (n, d)) in out.iter_mut().zip(ratios) {
        let v = n as i128 * (den / d) as i128;
        if v.abs() > SMALL_MAX as i128 {
            return None;
        }
        *o = v;
    }
    Some(out)
}

fn sign_i128(v: i128) -> Ordering {
    v.cmp(&0)
}

fn sign_big(v: &BigRational) -> Ordering {
    v.cmp(&BigRational::from_integer(0.into()))
}

pub fn orientation(p: &Point, q: &Point, r: &Point) -> Orientation {
    let s = cross_sign(p, q, r);
    match s {
        Ordering::Greater => Orientation::Left,
        Ordering::Less => Orientation::Right,
        Ordering::Equal => Orientation::Collinear,
    }
}

fn cross_sign(p: &Point, q: &Point, r: &Point) -> Ordering {
    if let Some([px, py, qx, qy, rx, ry]) = scaled([&p.x, &p.y, &q.x, &q.y, &r.x, &r.y]) {
        return sign_i128((qx - px) * (ry - py) - (qy - py) * (rx - px));
    }
    let (px, py) = (p.x.to_big(), p.y.to_big());
    let v = (q.x.to_big() - &px) * (r.y.to_big() - &py) - (q.y.to_big() - &py) * (r.x.to_big() - &px);
    sign_big(&v)
}

impl Segment {
    pub fn new(p: Point, q: Point) -> Result<Segment, GeomError> {
        match p.cmp(&q) {
            Ordering::Less => Ok(Segment { a: p, b: q }),
            Ordering::Greater => Ok(Segment { a: q, b: p }),
            Ordering::Equal => Err(GeomError::Degenerate(p)),
        }
    }

    pub fn from_ints(x1: i64, y1: i64, x2: i64, y2: i64) -> Segment {
        Segment::new(Point::new(x1, y1), Point::new(x2, y2)).expect("distinct endpoints")
    }

    pub fn is_vertical(&self) -> bool {
        self.a.x == self.b.x
    }

    /// y of the supporting line at `x`; the segment must not be vertical.
    pub fn y_at(&self, x: &Coord) -> Coord {
        debug_assert!(!self.is_vertical());
        if x == &self.a.x {
            return self.a.y.clone();
        }
        if x == &self.b.x {
            return self.b.y.clone();
        }
        let dy = &self.b.y - &self.a.y;
        let dx = &self.b.x - &self.a.x;
        let t = &(x - &self.a.x) * &dy;
        &self.a.y + &(&t / &dx)
    }

    /// Compares `p.y` with the supporting line at `p.x` (non-vertical only).
    pub fn cmp_point(&self, p: &Point) -> Ordering {
        debug_assert!(!self.is_vertical());
        cross_sign(&self.a, &self.b, p)
    }

    /// Closed containment of `p` in the segment.
    pub fn contains(&self, p: &Point) -> bool {
        &self.a <= p && p <= &self.b && cross_sign(&self.a, &self.b, p) == Ordering::Equal
    }

    /// Plain x-extent contains `x`.
    pub fn spans_x(&self, x: &Coord) -> bool {
        &self.a.x <= x && x <= &self.b.x
    }

    /// Lexicographic extent contains `p`.
    pub fn spans_lex(&self, p: &Point) -> bool {
        &self.a <= p && p <= &self.b
    }
}

/// Compares slopes of two non-vertical segments.
pub fn cmp_slope(s: &Segment, t: &Segment) -> Ordering {
    if let Some([sax, say, sbx, sby, tax, tay, tbx, tby]) =
        scaled([&s.a.x, &s.a.y, &s.b.x, &s.b.y, &t.a.x, &t.a.y, &t.b.x, &t.b.y])
    {
        let (a, b, c, e) = (sbx - sax, sby - say, tbx - tax, tby - tay);
        return (b * c).cmp(&(e * a));
    }
    let d = |c: &Segment| (&c.b.x - &c.a.x, &c.b.y - &c.a.y);
    let ((sdx, sdy), (tdx, tdy)) = (d(s), d(t));
    (sdy.to_big() * tdx.to_big()).cmp(&(tdy.to_big() * sdx.to_big()))
}

/// Compares the heights of two non-vertical segments at plain `x`.
pub fn cmp_y_at(s: &Segment, t: &Segment, x: &Coord) -> Ordering {
    if let Some([xa, sax, say, sbx, sby, tax, tay, tbx, tby]) =
        scaled([x, &s.a.x, &s.a.y, &s.b.x, &s.b.y, &t.a.x, &t.a.y, &t.b.x, &t.b.y])
    {
        let (sdx, sdy) = (sbx - sax, sby - say);
        let (tdx, tdy) = (tbx - tax, tby - tay);
        let sn = say * sdx + sdy * (xa - sax);
        let tn = tay * tdx + tdy * (xa - tax);
        return (sn * tdx).cmp(&(tn * sdx));
    }
    s.y_at(x).cmp(&t.y_at(x))
}

/// Orders two non-vertical segments along the sheared vertical line through
/// `at`. Both must cross that line, or end on it with the given side.
pub fn cmp_on_line(s: &Segment, t: &Segment, at: &Point, side: Side) -> Ordering {
    let c = cmp_y_at(s, t, &at.x);
    if c != Ordering::Equal {
        return c;
    }
    let meet = s.y_at(&at.x);
    let sl = cmp_slope(s, t);
    match at.y.cmp(&meet) {
        Ordering::Less => sl.reverse(),
        Ordering::Greater => sl,
        Ordering::Equal => match side {
            Side::L => sl.reverse(),
            Side::R => sl,
        },
    }
}

/// Where the upward ray from `p` first meets `s`, if it does.
pub fn ray_hit(s: &Segment, p: &Point) -> Option<Point> {
    if s.is_vertical() || !s.spans_lex(p) {
        return None;
    }
    if s.cmp_point(p) != Ordering::Less {
        return None;
    }
    Some(Point { x: p.x.clone(), y: s.y_at(&p.x) })
}

/// Orders two segments hit by the upward ray from `p`: first hit is `Less`.
pub fn cmp_hits(s: &Segment, t: &Segment, p: &Point) -> Ordering {
    cmp_on_line(s, t, p, Side::L)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trapezoid {
    pub top: Segment,
    pub bottom: Segment,
    pub xl: Coord,
    pub xr: Coord,
    pub owner_edge: EdgeId,
    pub owner_component: ComponentId,
}

impl Trapezoid {
    /// Height of the top side above plain `x`.
    pub fn top_y(&self, x: &Coord) -> Coord {
        self.top.y_at(x)
    }
}

/// Closed containment in plain x.
pub fn point_in_trapezoid(t: &Trapezoid, p: &Point) -> bool {
    t.xl <= p.x && p.x <= t.xr && t.bottom.cmp_point(p) != Ordering::Less && t.top.cmp_point(p) != Ordering::Greater
}
