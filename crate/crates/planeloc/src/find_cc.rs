//! Component of the outer boundary of a query point's face, found as the
//! owner of the lowest stabbed trapezoid among the vertical decompositions
//! of all enclosed faces ever created.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

use crate::blocks::cascade::Strategy;
use crate::geom::{cmp_slope, cmp_y_at, orientation, ComponentId, Coord, EdgeId, Orientation, Point, Segment, Trapezoid};
use crate::stab_lowest::{StabLowestIndex, StabStats};
use crate::subdivision::{edge_of, FaceEvent, InsertionClass, Subdivision};

/// One directed edge of a face cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleEdge {
    pub tail: Point,
    pub head: Point,
    pub edge: EdgeId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum DecomposeError {
    #[error("cycle is not closed")]
    Open,
    #[error("cycle does not bound a face on its left")]
    BadOrientation,
}

/// Maximal run of consecutive collinear edges going the same way.
#[derive(Debug, Clone)]
struct Run {
    seg: Segment,
    /// 1 rightward (face above), -1 leftward (face below), 0 vertical.
    dir: i8,
    /// Member edges with their plain x-extents.
    edges: Vec<(Coord, Coord, EdgeId)>,
}

impl Run {
    /// Member edge above plain `x`, preferring the leftmost.
    fn edge_at(&self, x: &Coord) -> EdgeId {
        self.edges.iter().find(|(lo, hi, _)| lo <= x && x <= hi).unwrap_or(&self.edges[0]).2
    }
}

fn dir_of(e: &CycleEdge) -> i8 {
    match e.head.x.cmp(&e.tail.x) {
        Ordering::Greater => 1,
        Ordering::Less => -1,
        Ordering::Equal => 0,
    }
}

fn continues(a: &CycleEdge, b: &CycleEdge) -> bool {
    if dir_of(a) != dir_of(b) || orientation(&a.tail, &a.head, &b.head) != Orientation::Collinear {
        return false;
    }
    // same direction along the line, not a turn back
    dir_of(a) != 0 || (a.head.y > a.tail.y) == (b.head.y > b.tail.y)
}

fn runs_of(cycle: &[CycleEdge]) -> Vec<Run> {
    let k = cycle.len();
    let start = (0..k).find(|&i| !continues(&cycle[(i + k - 1) % k], &cycle[i])).unwrap_or(0);
    let mut runs = Vec::new();
    let mut i = 0;
    while i < k {
        let first = &cycle[(start + i) % k];
        let mut j = i + 1;
        while j < k && continues(&cycle[(start + j - 1) % k], &cycle[(start + j) % k]) {
            j += 1;
        }
        let last = &cycle[(start + j - 1) % k];
        let seg = Segment::new(first.tail.clone(), last.head.clone()).expect("run has length");
        let edges = (i..j)
            .map(|t| {
                let c = &cycle[(start + t) % k];
                let (lo, hi) = if c.tail.x <= c.head.x { (&c.tail.x, &c.head.x) } else { (&c.head.x, &c.tail.x) };
                (lo.clone(), hi.clone(), c.edge)
            })
            .collect();
        runs.push(Run { seg, dir: dir_of(first), edges });
        i = j;
    }
    runs
}

/// Order of runs crossing or starting on the line `x`, as seen just right
/// of it; a leftward copy sorts below a rightward copy of the same line.
fn cmp_runs(r: &Run, s: &Run, x: &Coord) -> Ordering {
    cmp_y_at(&r.seg, &s.seg, x).then_with(|| cmp_slope(&r.seg, &s.seg)).then(r.dir.cmp(&s.dir))
}

/// Vertical decomposition of the region enclosed by a counterclockwise
/// cycle. Collinear consecutive edges act as one side; edges traversed
/// twice bound no area and yield no cells. Owners are set, components not.
pub fn vertical_decompose(cycle: &[CycleEdge]) -> Result<Vec<Trapezoid>, DecomposeError> {
    let k = cycle.len();
    if k < 3 || (0..k).any(|i| cycle[i].head != cycle[(i + 1) % k].tail) {
        return Err(DecomposeError::Open);
    }
    let mut area2 = Coord::zero();
    for c in cycle {
        area2 = &area2 + &(&(&c.tail.x * &c.head.y) - &(&c.head.x * &c.tail.y));
    }
    if area2.signum() != Ordering::Greater {
        return Err(DecomposeError::BadOrientation);
    }
    let runs = runs_of(cycle);
    // event points per plain x, and runs starting at each point
    let mut events: BTreeMap<Coord, BTreeMap<Coord, Vec<usize>>> = BTreeMap::new();
    for (i, r) in runs.iter().enumerate() {
        let starts = events.entry(r.seg.a.x.clone()).or_default().entry(r.seg.a.y.clone()).or_default();
        if r.dir != 0 {
            starts.push(i);
        }
        events.entry(r.seg.b.x.clone()).or_default().entry(r.seg.b.y.clone()).or_default();
    }
    let mut active: Vec<usize> = Vec::new();
    // open cell per bottom run, with its left x
    let mut open: HashMap<usize, Coord> = HashMap::new();
    let mut out = Vec::new();
    for (x, pts) in &events {
        let y_of = |r: usize| runs[r].seg.y_at(x);
        let mut ranges: Vec<(isize, usize, Vec<usize>)> = Vec::new();
        for (y, starts) in pts {
            let lo = active.partition_point(|&r| &y_of(r) < y) as isize - 1;
            let hi = active.partition_point(|&r| &y_of(r) <= y);
            match ranges.last_mut() {
                Some(last) if lo < last.1 as isize => {
                    last.1 = last.1.max(hi);
                    last.2.extend(starts);
                }
                _ => ranges.push((lo, hi, starts.clone())),
            }
        }
        for (lo, hi, starts) in ranges.into_iter().rev() {
            let from = (lo + 1) as usize;
            for b in lo.max(0) as usize..hi.min(active.len()) {
                if let Some(xl) = open.remove(&active[b]) {
                    close_cell(&runs, active[b], active.get(b + 1).copied(), xl, x.clone(), &mut out);
                }
            }
            let mut middle: Vec<usize> =
                active[from..hi].iter().copied().filter(|&r| &runs[r].seg.b.x > x).chain(starts).collect();
            middle.sort_by(|&r, &s| cmp_runs(&runs[r], &runs[s], x));
            let m = middle.len();
            active.splice(from..hi, middle);
            for b in lo.max(0) as usize..(from + m).min(active.len()) {
                if runs[active[b]].dir == 1 {
                    open.insert(active[b], x.clone());
                }
            }
        }
    }
    debug_assert!(active.is_empty() && open.is_empty());
    Ok(out)
}

fn close_cell(runs: &[Run], bottom: usize, top: Option<usize>, xl: Coord, xr: Coord, out: &mut Vec<Trapezoid>) {
    let top = top.expect("face is bounded above");
    let (b, t) = (&runs[bottom], &runs[top]);
    debug_assert_eq!(t.dir, -1, "interior gap must end at a leftward side");
    let mid = &(&xl + &xr) / &Coord::from_int(2);
    if cmp_y_at(&b.seg, &t.seg, &mid) != Ordering::Less {
        return;
    }
    out.push(Trapezoid { top: t.seg.clone(), bottom: b.seg.clone(), owner_edge: t.edge_at(&mid), xl, xr, owner_component: 0 });
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FindCcStats {
    pub trapezoids: u64,
    pub faces_decomposed: u64,
    pub stab: StabStats,
}

#[derive(Debug, Clone, Default)]
pub struct FindCc {
    index: StabLowestIndex,
    faces_decomposed: u64,
}

impl FindCc {
    pub fn new(fanout: usize, strategy: Strategy) -> FindCc {
        FindCc { index: StabLowestIndex::new(fanout, strategy), faces_decomposed: 0 }
    }

    pub fn index(&self) -> &StabLowestIndex {
        &self.index
    }

    pub fn trapezoid_count(&self) -> usize {
        self.index.len()
    }

    /// Decomposes the face enclosed by a same-component insertion; returns
    /// the number of trapezoids added.
    pub fn on_face_event(&mut self, sub: &Subdivision, ev: &FaceEvent, class: InsertionClass) -> usize {
        let cycle = match (ev, class) {
            (FaceEvent::NewEnclosedFace { cycle, .. }, InsertionClass::SameComponent { .. }) => cycle,
            _ => return 0,
        };
        let edges: Vec<CycleEdge> = cycle
            .iter()
            .map(|&d| CycleEdge { tail: sub.tail_pos(d).clone(), head: sub.head_pos(d).clone(), edge: edge_of(d) })
            .collect();
        let traps = vertical_decompose(&edges).expect("enclosed face cycle is closed and counterclockwise");
        self.faces_decomposed += 1;
        let n = traps.len();
        for mut t in traps {
            t.owner_component = sub.component(t.owner_edge);
            self.index.insert(t);
        }
        n
    }

    /// Component whose outer boundary encloses the face of `q`, if any.
    pub fn query_component(&self, sub: &Subdivision, q: &Point) -> Option<ComponentId> {
        self.index.query_lowest(q).map(|(_, t)| sub.component(t.owner_edge))
    }

    pub fn stats(&self) -> FindCcStats {
        FindCcStats { trapezoids: self.index.len() as u64, faces_decomposed: self.faces_decomposed, stab: self.index.stats() }
    }

    pub fn check_invariants(&self) -> Result<(), String> {
        self.index.check_invariants()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::rng;
    use crate::geom::point_in_trapezoid;
    use crate::oracle::{validate_insertion, NaiveResult, NaiveSubdivision};
    use rand::Rng;

    fn poly(pts: &[(i64, i64)]) -> Vec<CycleEdge> {
        (0..pts.len())
            .map(|i| {
                let (a, b) = (pts[i], pts[(i + 1) % pts.len()]);
                CycleEdge { tail: Point::new(a.0, a.1), head: Point::new(b.0, b.1), edge: i as EdgeId }
            })
            .collect()
    }

    #[test]
    fn examples() {
        let sq = vertical_decompose(&poly(&[(0, 0), (10, 0), (10, 10), (0, 10)])).unwrap();
        assert_eq!(sq.len(), 1);
        assert_eq!(sq[0].owner_edge, 2);
        // the apex extension splits the triangle in two
        let tri = vertical_decompose(&poly(&[(0, 0), (10, 0), (5, 5)])).unwrap();
        assert_eq!(tri.len(), 2);
        let right = vertical_decompose(&poly(&[(0, 0), (10, 0), (10, 5)])).unwrap();
        assert_eq!(right.len(), 1);
        let l = vertical_decompose(&poly(&[(0, 0), (10, 0), (10, 5), (5, 5), (5, 10), (0, 10)])).unwrap();
        assert_eq!(l.len(), 2);
        assert!(l.iter().all(|t| t.xl == 5.into() || t.xr == 5.into()));
        assert_eq!(vertical_decompose(&poly(&[(0, 0), (0, 10), (10, 10), (10, 0)])), Err(DecomposeError::BadOrientation));
    }

    #[test]
    fn collinear_edges_form_one_side() {
        let t = vertical_decompose(&poly(&[(0, 0), (5, 0), (10, 0), (10, 10), (5, 10), (0, 10)])).unwrap();
        assert_eq!(t.len(), 1);
    }

    #[test]
    fn antenna_has_no_area() {
        // square with a spike from the bottom side into the interior
        let pts = [(0, 0), (4, 0), (4, 6), (4, 0), (10, 0), (10, 10), (0, 10)];
        let t = vertical_decompose(&poly(&pts)).unwrap();
        assert_eq!(t.len(), 2);
        let area: f64 = t.iter().map(|t| (t.xr.to_f64() - t.xl.to_f64()) * 10.0).sum();
        assert_eq!(area, 100.0);
    }

    fn random_polygon(r: &mut impl Rng, span: i64) -> Option<Vec<(i64, i64)>> {
        let k = r.gen_range(3..14);
        let mut ang: Vec<f64> = (0..k).map(|_| r.gen_range(0.0..std::f64::consts::TAU)).collect();
        ang.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut pts: Vec<(i64, i64)> = ang
            .iter()
            .map(|a| {
                let rad = r.gen_range(1.0..span as f64);
                ((a.cos() * rad).round() as i64, (a.sin() * rad).round() as i64)
            })
            .collect();
        pts.dedup();
        if pts.len() < 3 || pts.first() == pts.last() {
            return None;
        }
        let mut segs: Vec<Segment> = Vec::new();
        for i in 0..pts.len() {
            let (a, b) = (pts[i], pts[(i + 1) % pts.len()]);
            let s = Segment::new(Point::new(a.0, a.1), Point::new(b.0, b.1)).ok()?;
            validate_insertion(&segs, &[], &s).ok()?;
            segs.push(s);
        }
        Some(pts)
    }

    #[test]
    fn decomposition_tiles_random_polygons() {
        let mut r = rng(7);
        let mut done = 0;
        while done < 300 {
            let span = if done % 2 == 0 { 4 } else { 40 };
            let Some(pts) = random_polygon(&mut r, span) else { continue };
            let cyc = poly(&pts);
            let traps = match vertical_decompose(&cyc) {
                Ok(t) => t,
                Err(DecomposeError::BadOrientation) => continue,
                Err(e) => panic!("{e}"),
            };
            done += 1;
            assert!(traps.len() <= 3 * pts.len(), "{} cells for {} edges", traps.len(), pts.len());
            let segs: Vec<Segment> = cyc.iter().map(|c| Segment::new(c.tail.clone(), c.head.clone()).unwrap()).collect();
            let naive = NaiveSubdivision::build(&segs, &[]);
            for _ in 0..200 {
                // half-integer points avoid vertices but still hit vertical lines
                let q = Point::new(
                    Coord::from_ratio(r.gen_range(-2 * span - 2..=2 * span + 2), 2),
                    Coord::from_ratio(r.gen_range(-2 * span - 2..=2 * span + 2), 2),
                );
                let hits = traps.iter().filter(|t| point_in_trapezoid(t, &q)).count();
                match naive.locate(&q) {
                    NaiveResult::Face(_) => assert!(hits >= 1, "{pts:?} {q:?}"),
                    NaiveResult::Outer => assert_eq!(hits, 0, "{pts:?} {q:?}"),
                    _ => {}
                }
            }
            // interiors are disjoint
            for (i, s) in traps.iter().enumerate() {
                for t in &traps[i + 1..] {
                    let lo = s.xl.clone().max(t.xl.clone());
                    let hi = s.xr.clone().min(t.xr.clone());
                    if lo >= hi {
                        continue;
                    }
                    let mid = &(&lo + &hi) / &Coord::from_int(2);
                    let apart = cmp_y_at(&s.top, &t.bottom, &mid) != Ordering::Greater
                        || cmp_y_at(&t.top, &s.bottom, &mid) != Ordering::Greater;
                    assert!(apart, "{pts:?} {s:?} {t:?}");
                }
            }
        }
    }

    fn square(sub: &mut Subdivision, f: &mut FindCc, lo: i64, hi: i64) -> usize {
        let mut added = 0;
        for s in [
            Segment::from_ints(lo, lo, hi, lo),
            Segment::from_ints(hi, lo, hi, hi),
            Segment::from_ints(lo, hi, hi, hi),
            Segment::from_ints(lo, lo, lo, hi),
        ] {
            let (_, class, ev) = sub.insert_edge(&s).unwrap();
            added += f.on_face_event(sub, &ev, class);
        }
        added
    }

    #[test]
    fn nested_squares_components() {
        let mut sub = Subdivision::new();
        let mut f = FindCc::default();
        assert_eq!(f.query_component(&sub, &Point::new(5, 5)), None);
        assert_eq!(square(&mut sub, &mut f, 0, 10), 1);
        assert_eq!(square(&mut sub, &mut f, 3, 7), 1);
        let g1 = sub.component(0);
        let g2 = sub.component(4);
        assert_ne!(g1, g2);
        assert_eq!(f.query_component(&sub, &Point::new(5, 5)), Some(g2));
        assert_eq!(f.query_component(&sub, &Point::new(5, 8)), Some(g1));
        assert_eq!(f.query_component(&sub, &Point::new(5, 11)), None);
        // a diagonal inside the inner square splits an existing face
        let (_, class, ev) = sub.insert_edge(&Segment::from_ints(3, 3, 7, 7)).unwrap();
        assert_eq!(f.on_face_event(&sub, &ev, class), 0);
        // joining the squares merges components without new cells
        let (_, class, ev) = sub.insert_edge(&Segment::from_ints(0, 0, 3, 3)).unwrap();
        assert_eq!(f.on_face_event(&sub, &ev, class), 0);
        assert_eq!(f.query_component(&sub, &Point::new(5, 4)), Some(sub.component(0)));
        assert_eq!(f.trapezoid_count(), 2);
    }
}
