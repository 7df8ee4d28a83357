//! Brute-force references: point location by full face reconstruction,
//! linear-scan stabbing and ray shooting, and crossing validation.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use crate::geom::{cmp_hits, orientation, point_in_trapezoid, ray_hit, Coord, Orientation, Point, Segment, Trapezoid};

/// Canonical face token: the smallest directed edge id on the outer cycle.
pub type FaceToken = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NaiveResult {
    Outer,
    Face(FaceToken),
    OnVertex,
    /// Index of the edge containing the point in its relative interior.
    OnEdge(usize),
}

/// Faces of a segment arrangement, rebuilt from scratch.
#[derive(Debug, Clone)]
pub struct NaiveSubdivision {
    segs: Vec<Segment>,
    points: BTreeSet<Point>,
    /// Cycle index of every directed edge.
    cycle_of: Vec<usize>,
    cycles: Vec<Vec<u32>>,
    area2: Vec<Coord>,
}

fn quadrant_cmp(a: &(Coord, Coord), b: &(Coord, Coord)) -> Ordering {
    let upper = |d: &(Coord, Coord)| d.1 > Coord::zero() || (d.1 == Coord::zero() && d.0 > Coord::zero());
    upper(b).cmp(&upper(a)).then_with(|| {
        let cross = &(&a.0 * &b.1) - &(&a.1 * &b.0);
        Coord::zero().cmp(&cross)
    })
}

impl NaiveSubdivision {
    /// `segs[i]` owns directed edges `2i` (a to b) and `2i + 1`.
    pub fn build(segs: &[Segment], isolated: &[Point]) -> NaiveSubdivision {
        let mut points: BTreeSet<Point> = isolated.iter().cloned().collect();
        let mut out: BTreeMap<Point, Vec<u32>> = BTreeMap::new();
        let tail = |d: u32| if d.is_multiple_of(2) { &segs[d as usize / 2].a } else { &segs[d as usize / 2].b };
        let head = |d: u32| tail(d ^ 1);
        for (i, s) in segs.iter().enumerate() {
            points.insert(s.a.clone());
            points.insert(s.b.clone());
            out.entry(s.a.clone()).or_default().push(2 * i as u32);
            out.entry(s.b.clone()).or_default().push(2 * i as u32 + 1);
        }
        let dir = |d: u32| (&head(d).x - &tail(d).x, &head(d).y - &tail(d).y);
        let mut pos = vec![0usize; 2 * segs.len()];
        for list in out.values_mut() {
            list.sort_by(|&a, &b| quadrant_cmp(&dir(a), &dir(b)));
            for (k, &d) in list.iter().enumerate() {
                pos[d as usize] = k;
            }
        }
        let next = |d: u32| {
            let t = d ^ 1;
            let list = &out[head(d)];
            let k = pos[t as usize];
            list[(k + list.len() - 1) % list.len()]
        };
        let mut cycle_of = vec![usize::MAX; 2 * segs.len()];
        let mut cycles = Vec::new();
        let mut area2 = Vec::new();
        for s in 0..2 * segs.len() as u32 {
            if cycle_of[s as usize] != usize::MAX {
                continue;
            }
            let mut c = Vec::new();
            let mut d = s;
            let mut acc = Coord::zero();
            loop {
                cycle_of[d as usize] = cycles.len();
                c.push(d);
                let (p, q) = (tail(d), head(d));
                acc = &acc + &(&(&p.x * &q.y) - &(&q.x * &p.y));
                d = next(d);
                if d == s {
                    break;
                }
            }
            cycles.push(c);
            area2.push(acc);
        }
        NaiveSubdivision { segs: segs.to_vec(), points, cycle_of, cycles, area2 }
    }

    /// Counterclockwise cycles, each the outer boundary of a bounded face.
    pub fn bounded_faces(&self) -> Vec<(FaceToken, &[u32])> {
        self.cycles
            .iter()
            .zip(&self.area2)
            .filter(|(_, a)| **a > Coord::zero())
            .map(|(c, _)| (*c.iter().min().unwrap(), c.as_slice()))
            .collect()
    }

    pub fn cycles(&self) -> &[Vec<u32>] {
        &self.cycles
    }

    pub fn locate(&self, q: &Point) -> NaiveResult {
        if self.points.contains(q) {
            return NaiveResult::OnVertex;
        }
        if let Some(i) = self.segs.iter().position(|s| s.contains(q)) {
            return NaiveResult::OnEdge(i);
        }
        let mut crossings = vec![0u32; self.cycles.len()];
        for (i, s) in self.segs.iter().enumerate() {
            if ray_hit(s, q).is_some() {
                crossings[self.cycle_of[2 * i]] += 1;
                crossings[self.cycle_of[2 * i + 1]] += 1;
            }
        }
        let best = (0..self.cycles.len())
            .filter(|&c| crossings[c] % 2 == 1 && self.area2[c] > Coord::zero())
            .min_by(|&a, &b| self.area2[a].cmp(&self.area2[b]));
        match best {
            None => NaiveResult::Outer,
            Some(c) => NaiveResult::Face(*self.cycles[c].iter().min().unwrap()),
        }
    }
}

/// Point location in the arrangement of `segs` plus `isolated` points.
pub fn naive_locate(segs: &[Segment], isolated: &[Point], q: &Point) -> NaiveResult {
    NaiveSubdivision::build(segs, isolated).locate(q)
}

/// Index of the lowest trapezoid containing `q`, ties by owner then index.
pub fn naive_stab_lowest(set: &[Trapezoid], q: &Point) -> Option<usize> {
    set.iter()
        .enumerate()
        .filter(|(_, t)| point_in_trapezoid(t, q))
        .min_by(|(i, s), (j, t)| s.top_y(&q.x).cmp(&t.top_y(&q.x)).then(s.owner_edge.cmp(&t.owner_edge)).then(i.cmp(j)))
        .map(|(i, _)| i)
}

/// Index of the first segment hit by the upward ray from `q`.
pub fn naive_ray_shoot(edges: &[Segment], q: &Point) -> Option<usize> {
    edges
        .iter()
        .enumerate()
        .filter(|(_, s)| ray_hit(s, q).is_some())
        .min_by(|(i, s), (j, t)| cmp_hits(s, t, q).then(i.cmp(j)))
        .map(|(i, _)| i)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Violation {
    #[error("segment meets edge {0} away from a shared endpoint")]
    Touches(usize),
    #[error("segment passes through vertex {0:?}")]
    ThroughVertex(Point),
    #[error("segment has zero length")]
    Degenerate,
}

/// Checks that `e` meets existing edges only at shared endpoints and
/// passes through no isolated vertex.
pub fn validate_insertion(existing: &[Segment], isolated: &[Point], e: &Segment) -> Result<(), Violation> {
    if e.a == e.b {
        return Err(Violation::Degenerate);
    }
    for p in isolated {
        if e.contains(p) && p != &e.a && p != &e.b {
            return Err(Violation::ThroughVertex(p.clone()));
        }
    }
    for (i, s) in existing.iter().enumerate() {
        let ok = match meet(e, s) {
            Meet::Apart => true,
            Meet::At(p) => (p == e.a || p == e.b) && (p == s.a || p == s.b),
            Meet::Many => false,
        };
        if !ok {
            return Err(Violation::Touches(i));
        }
    }
    Ok(())
}

enum Meet {
    Apart,
    At(Point),
    Many,
}

fn meet(e: &Segment, s: &Segment) -> Meet {
    use Orientation::*;
    let o1 = orientation(&e.a, &e.b, &s.a);
    let o2 = orientation(&e.a, &e.b, &s.b);
    let o3 = orientation(&s.a, &s.b, &e.a);
    let o4 = orientation(&s.a, &s.b, &e.b);
    if o1 == Collinear && o2 == Collinear {
        let lo = e.a.clone().max(s.a.clone());
        let hi = e.b.clone().min(s.b.clone());
        return match lo.cmp(&hi) {
            Ordering::Greater => Meet::Apart,
            Ordering::Equal => Meet::At(lo),
            Ordering::Less => Meet::Many,
        };
    }
    let straddle = |x: Orientation, y: Orientation| x == Collinear || y == Collinear || x != y;
    if !straddle(o1, o2) || !straddle(o3, o4) {
        return Meet::Apart;
    }
    let at = [(o1, &s.a), (o2, &s.b), (o3, &e.a), (o4, &e.b)].into_iter().find(|(o, _)| *o == Collinear);
    match at {
        Some((_, p)) => Meet::At(p.clone()),
        // proper crossing
        None => Meet::Many,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seg(x1: i64, y1: i64, x2: i64, y2: i64) -> Segment {
        Segment::from_ints(x1, y1, x2, y2)
    }

    fn sq(lo: i64, hi: i64) -> Vec<Segment> {
        vec![seg(lo, lo, hi, lo), seg(hi, lo, hi, hi), seg(lo, hi, hi, hi), seg(lo, lo, lo, hi)]
    }

    #[test]
    fn locate_examples() {
        assert_eq!(naive_locate(&[], &[], &Point::new(1, 1)), NaiveResult::Outer);
        let mut segs = sq(0, 10);
        segs.extend(sq(4, 6));
        let n = NaiveSubdivision::build(&segs, &[]);
        assert_eq!(n.bounded_faces().len(), 2);
        let inner = n.locate(&Point::new(5, 5));
        let ring = n.locate(&Point::new(5, 8));
        assert!(matches!(inner, NaiveResult::Face(_)) && matches!(ring, NaiveResult::Face(_)));
        assert_ne!(inner, ring);
        assert_eq!(inner, NaiveResult::Face(8));
        assert_eq!(n.locate(&Point::new(5, 20)), NaiveResult::Outer);
        assert_eq!(n.locate(&Point::new(5, 10)), NaiveResult::OnEdge(2));
        assert_eq!(n.locate(&Point::new(0, 0)), NaiveResult::OnVertex);
        // ray through a vertex of the inner square
        assert_eq!(n.locate(&Point::new(4, 1)), ring);
        assert_eq!(n.locate(&Point::new(6, 1)), ring);
    }

    #[test]
    fn ray_shoot_examples() {
        let segs = sq(0, 10);
        assert_eq!(naive_ray_shoot(&segs, &Point::new(5, 5)), Some(2));
        assert_eq!(naive_ray_shoot(&[], &Point::new(5, 5)), None);
        assert_eq!(naive_ray_shoot(&[seg(0, 0, 10, 0)], &Point::new(5, 5)), None);
    }

    #[test]
    fn stab_examples() {
        let t = |top: Segment, owner| Trapezoid {
            top,
            bottom: seg(0, 0, 10, 0),
            xl: 0.into(),
            xr: 10.into(),
            owner_edge: owner,
            owner_component: 0,
        };
        let set = vec![t(seg(0, 10, 10, 10), 0), t(seg(0, 5, 10, 5), 1), t(seg(0, 5, 10, 5), 0)];
        assert_eq!(naive_stab_lowest(&set, &Point::new(5, 3)), Some(2));
        assert_eq!(naive_stab_lowest(&set, &Point::new(5, 7)), Some(0));
        assert_eq!(naive_stab_lowest(&set, &Point::new(5, 11)), None);
    }

    #[test]
    fn validation_examples() {
        let base = vec![seg(0, 0, 10, 0)];
        assert!(validate_insertion(&base, &[], &seg(5, -5, 5, 5)).is_err());
        assert!(validate_insertion(&base, &[], &seg(10, 0, 12, 4)).is_ok());
        assert!(validate_insertion(&base, &[], &seg(5, 0, 5, 5)).is_err());
        assert!(validate_insertion(&base, &[], &seg(8, 0, 20, 0)).is_err());
        assert!(validate_insertion(&base, &[], &seg(10, 0, 20, 0)).is_ok());
        assert!(validate_insertion(&base, &[Point::new(3, 3)], &seg(0, 3, 6, 3)).is_err());
    }
}
