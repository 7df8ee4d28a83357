//! Incremental planar subdivision: vertices, rotations, connectivity,
//! outer-boundary queues of bounded faces, and per-edge flags.
//!
//! Every edge `e` has two directed twins: `2e` runs from the
//! lexicographically smaller endpoint to the larger, `2e + 1` back. A
//! directed edge sees its face on the left; a bounded face's outer boundary
//! is a counterclockwise cycle of directed edges kept in one queue.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::ops::Bound;

use crate::blocks::dsu::DisjointSet;
use crate::blocks::queue::{ElementHandle, QueueForest, QueueId};
use crate::geom::{ComponentId, Coord, EdgeId, Point, Segment};

pub type VertexId = u32;
pub type DirEdge = u32;

pub fn twin(d: DirEdge) -> DirEdge {
    d ^ 1
}

pub fn edge_of(d: DirEdge) -> EdgeId {
    d >> 1
}

/// A direction vector ordered by counterclockwise angle from +x.
#[derive(Debug, Clone)]
pub struct Dir {
    dx: Coord,
    dy: Coord,
}

impl Dir {
    pub fn between(from: &Point, to: &Point) -> Dir {
        Dir { dx: &to.x - &from.x, dy: &to.y - &from.y }
    }

    fn half(&self) -> u8 {
        let (sx, sy) = (self.dx.signum(), self.dy.signum());
        if sy == Ordering::Greater || (sy == Ordering::Equal && sx == Ordering::Greater) {
            0
        } else {
            1
        }
    }
}

impl Ord for Dir {
    fn cmp(&self, o: &Dir) -> Ordering {
        self.half().cmp(&o.half()).then_with(|| {
            let cross = &(&self.dx * &o.dy) - &(&self.dy * &o.dx);
            cross.signum().reverse()
        })
    }
}

impl PartialOrd for Dir {
    fn partial_cmp(&self, o: &Dir) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl PartialEq for Dir {
    fn eq(&self, o: &Dir) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}

impl Eq for Dir {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Flag {
    True,
    False,
    Null,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FaceName {
    Outer,
    Bounded(QueueId),
}

pub const OUTER: FaceName = FaceName::Outer;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InsertionClass {
    Isolated,
    OneEndpointAttached,
    TwoComponentsBridged,
    SameComponent { splits_face: bool, encloses_new_face: bool },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FaceEvent {
    NoNewFace,
    FaceSplit { old: FaceName, new: FaceName },
    NewEnclosedFace { name: FaceName, cycle: Vec<DirEdge> },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SubdivisionError {
    #[error("a vertex already exists at {0:?}")]
    DuplicateVertex(Point),
    #[error("edge has zero length")]
    Degenerate,
    #[error("edge overlaps an existing edge at {0:?}")]
    Overlap(Point),
    #[error("point {0:?} is not interior to edge {1}")]
    NotOnEdge(Point, EdgeId),
    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SubdivisionStats {
    pub flag_transitions: u64,
    pub queue_insertions: u64,
    pub faces_created: u64,
    pub face_splits: u64,
}

#[derive(Debug, Clone)]
struct Vertex {
    pos: Point,
    /// Outgoing directed edges keyed by direction.
    rot: BTreeMap<Dir, DirEdge>,
}

#[derive(Debug, Clone)]
struct EdgeRec {
    seg: Segment,
    va: VertexId,
    vb: VertexId,
    flag: Flag,
}

struct Plan {
    class: InsertionClass,
    h_u: Option<DirEdge>,
    h_v: Option<DirEdge>,
}

#[derive(Debug, Clone, Default)]
pub struct Subdivision {
    vindex: BTreeMap<Point, VertexId>,
    verts: Vec<Vertex>,
    edges: Vec<EdgeRec>,
    handles: Vec<Option<ElementHandle>>,
    dsu: DisjointSet,
    queues: QueueForest,
    stats: SubdivisionStats,
}

impl Subdivision {
    pub fn new() -> Subdivision {
        Subdivision::default()
    }

    pub fn vertex_count(&self) -> usize {
        self.verts.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn stats(&self) -> SubdivisionStats {
        self.stats
    }

    pub fn vertex_at(&self, p: &Point) -> Option<VertexId> {
        self.vindex.get(p).copied()
    }

    pub fn vertex_pos(&self, v: VertexId) -> &Point {
        &self.verts[v as usize].pos
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.verts[v as usize].rot.len()
    }

    /// Outgoing directed edges of `v` in counterclockwise order from +x.
    pub fn rotation(&self, v: VertexId) -> Vec<DirEdge> {
        self.verts[v as usize].rot.values().copied().collect()
    }

    pub fn segment(&self, e: EdgeId) -> &Segment {
        &self.edges[e as usize].seg
    }

    pub fn segments(&self) -> impl Iterator<Item = &Segment> + '_ {
        self.edges.iter().map(|r| &r.seg)
    }

    pub fn vertex_points(&self) -> impl Iterator<Item = &Point> + '_ {
        self.verts.iter().map(|v| &v.pos)
    }

    pub fn interior_flag(&self, e: EdgeId) -> Flag {
        self.edges[e as usize].flag
    }

    /// Component of edge `e` (a representative edge id).
    pub fn component(&self, e: EdgeId) -> ComponentId {
        self.dsu.find_const(e)
    }

    pub fn component_mut(&mut self, e: EdgeId) -> ComponentId {
        self.dsu.find(e)
    }

    pub fn vertex_component(&self, v: VertexId) -> Option<ComponentId> {
        self.verts[v as usize].rot.values().next().map(|&d| self.component(edge_of(d)))
    }

    pub fn tail(&self, d: DirEdge) -> VertexId {
        let r = &self.edges[edge_of(d) as usize];
        if d & 1 == 0 {
            r.va
        } else {
            r.vb
        }
    }

    pub fn head(&self, d: DirEdge) -> VertexId {
        self.tail(twin(d))
    }

    pub fn tail_pos(&self, d: DirEdge) -> &Point {
        self.vertex_pos(self.tail(d))
    }

    pub fn head_pos(&self, d: DirEdge) -> &Point {
        self.vertex_pos(self.head(d))
    }

    fn dir_of(&self, d: DirEdge) -> Dir {
        Dir::between(self.tail_pos(d), self.head_pos(d))
    }

    /// The boundary successor of `d`: the edge after `twin(d)` clockwise
    /// around the head of `d`.
    pub fn next(&self, d: DirEdge) -> DirEdge {
        let rot = &self.verts[self.head(d) as usize].rot;
        let key = self.dir_of(twin(d));
        rot.range(..key).next_back().or_else(|| rot.iter().next_back()).map(|(_, &x)| x).expect("head has an incident edge")
    }

    pub fn trace_cycle(&self, start: DirEdge) -> Vec<DirEdge> {
        let mut out = vec![start];
        let mut d = self.next(start);
        while d != start {
            out.push(d);
            d = self.next(d);
        }
        out
    }

    /// Twice the signed area enclosed by a directed cycle.
    pub fn cycle_area2(&self, cycle: &[DirEdge]) -> Coord {
        let mut acc = Coord::zero();
        for &d in cycle {
            let (p, q) = (self.tail_pos(d), self.head_pos(d));
            acc = &acc + &(&(&p.x * &q.y) - &(&q.x * &p.y));
        }
        acc
    }

    fn queue_of_dir(&self, d: DirEdge) -> Option<QueueId> {
        self.handles[d as usize].map(|h| self.queues.queue_of(h).expect("live handle"))
    }

    pub fn face_name_of_directed_edge(&self, d: DirEdge) -> Option<FaceName> {
        if d as usize >= self.handles.len() {
            return None;
        }
        self.queue_of_dir(d).map(FaceName::Bounded)
    }

    /// Outer boundary cycle of a bounded face, in queue order.
    pub fn face_cycle(&self, f: FaceName) -> Vec<DirEdge> {
        match f {
            FaceName::Outer => Vec::new(),
            FaceName::Bounded(q) if self.queues.is_live(q) => self.queues.to_vec(q),
            FaceName::Bounded(_) => Vec::new(),
        }
    }

    /// Names of all bounded faces.
    pub fn faces(&self) -> Vec<FaceName> {
        self.queues.live_ids().filter(|&q| !self.queues.is_empty(q)).map(FaceName::Bounded).collect()
    }

    /// The incoming edge at `v` whose left face contains direction `dir`.
    fn sector_pred(&self, v: VertexId, dir: &Dir) -> Result<DirEdge, SubdivisionError> {
        let rot = &self.verts[v as usize].rot;
        if rot.contains_key(dir) {
            return Err(SubdivisionError::Overlap(self.vertex_pos(v).clone()));
        }
        let succ = rot
            .range((Bound::Excluded(dir), Bound::Unbounded))
            .next()
            .or_else(|| rot.iter().next())
            .map(|(_, &x)| x)
            .expect("attached vertex");
        Ok(twin(succ))
    }

    fn attached(&self, p: &Point) -> Option<VertexId> {
        self.vertex_at(p).filter(|&v| self.degree(v) > 0)
    }

    fn plan(&self, seg: &Segment) -> Result<Plan, SubdivisionError> {
        if seg.a == seg.b {
            return Err(SubdivisionError::Degenerate);
        }
        let u = self.attached(&seg.a);
        let v = self.attached(&seg.b);
        let h_u = match u {
            Some(u) => Some(self.sector_pred(u, &Dir::between(&seg.a, &seg.b))?),
            None => None,
        };
        let h_v = match v {
            Some(v) => Some(self.sector_pred(v, &Dir::between(&seg.b, &seg.a))?),
            None => None,
        };
        let class = match (u, v) {
            (None, None) => InsertionClass::Isolated,
            (Some(_), None) | (None, Some(_)) => InsertionClass::OneEndpointAttached,
            (Some(u), Some(v)) => {
                if self.vertex_component(u) == self.vertex_component(v) {
                    let splits = self.queue_of_dir(h_u.unwrap()).is_some();
                    InsertionClass::SameComponent { splits_face: splits, encloses_new_face: !splits }
                } else {
                    InsertionClass::TwoComponentsBridged
                }
            }
        };
        Ok(Plan { class, h_u, h_v })
    }

    pub fn classify_insertion(&self, seg: &Segment) -> Result<InsertionClass, SubdivisionError> {
        self.plan(seg).map(|p| p.class)
    }

    fn get_or_add_vertex(&mut self, p: &Point) -> VertexId {
        if let Some(v) = self.vertex_at(p) {
            return v;
        }
        let id = self.verts.len() as VertexId;
        self.verts.push(Vertex { pos: p.clone(), rot: BTreeMap::new() });
        self.vindex.insert(p.clone(), id);
        id
    }

    fn set_flag(&mut self, e: EdgeId, new: Flag) {
        let old = self.edges[e as usize].flag;
        if old == new {
            return;
        }
        assert!(old != Flag::False, "flag of edge {e} left False");
        assert!(new != Flag::Null, "flag of edge {e} became Null");
        self.edges[e as usize].flag = new;
        self.stats.flag_transitions += 1;
    }

    fn push(&mut self, q: QueueId, d: DirEdge) {
        let h = self.queues.push_back(q, d).expect("live queue");
        self.handles[d as usize] = Some(h);
        self.stats.queue_insertions += 1;
    }

    fn handle(&self, d: DirEdge) -> ElementHandle {
        self.handles[d as usize].expect("directed edge is queued")
    }

    /// Inserts `p` as a vertex. With `on_edge`, `p` must be interior to
    /// that edge, which is split in two; otherwise `p` becomes isolated.
    pub fn insert_vertex(&mut self, p: &Point, on_edge: Option<EdgeId>) -> Result<VertexId, SubdivisionError> {
        if self.vindex.contains_key(p) {
            return Err(SubdivisionError::DuplicateVertex(p.clone()));
        }
        let Some(e) = on_edge else {
            return Ok(self.get_or_add_vertex(p));
        };
        let rec = self.edges.get(e as usize).ok_or(SubdivisionError::UnknownEdge(e))?.clone();
        if !rec.seg.contains(p) {
            return Err(SubdivisionError::NotOnEdge(p.clone(), e));
        }
        let w = self.get_or_add_vertex(p);
        let e2 = self.edges.len() as EdgeId;
        self.edges[e as usize].seg = Segment { a: rec.seg.a.clone(), b: p.clone() };
        self.edges[e as usize].vb = w;
        self.edges.push(EdgeRec { seg: Segment { a: p.clone(), b: rec.seg.b.clone() }, va: w, vb: rec.vb, flag: rec.flag });
        self.handles.extend([None, None]);
        let s = self.dsu.make_set();
        debug_assert_eq!(s, e2);
        self.dsu.union(e, e2);
        let back = Dir::between(&rec.seg.b, &rec.seg.a);
        *self.verts[rec.vb as usize].rot.get_mut(&back).expect("rotation entry") = 2 * e2 + 1;
        let wr = &mut self.verts[w as usize].rot;
        wr.insert(Dir::between(p, &rec.seg.a), 2 * e + 1);
        wr.insert(Dir::between(p, &rec.seg.b), 2 * e2);
        if let Some(h) = self.handles[2 * e as usize] {
            let q = self.queues.queue_of(h).expect("live handle");
            let h2 = self.queues.insert_after(q, h, 2 * e2).expect("queue insert");
            self.handles[2 * e2 as usize] = Some(h2);
            self.stats.queue_insertions += 1;
        }
        if let Some(h) = self.handles[2 * e as usize + 1] {
            let q = self.queues.queue_of(h).expect("live handle");
            let h2 = self.queues.insert_before(q, h, 2 * e2 + 1).expect("queue insert");
            self.handles[2 * e2 as usize + 1] = Some(h2);
            self.stats.queue_insertions += 1;
        }
        Ok(w)
    }

    /// Inserts a segment whose endpoints are vertices or lie inside faces
    /// and which meets the subdivision nowhere else.
    pub fn insert_edge(&mut self, seg: &Segment) -> Result<(EdgeId, InsertionClass, FaceEvent), SubdivisionError> {
        let plan = self.plan(seg)?;
        // the cycle spliced into a face when bridging, traced before rotations change
        let bridge = match plan.class {
            InsertionClass::TwoComponentsBridged => {
                let (hu, hv) = (plan.h_u.unwrap(), plan.h_v.unwrap());
                if self.queue_of_dir(hu).is_some() {
                    Some((true, self.trace_cycle(self.next(hv))))
                } else if self.queue_of_dir(hv).is_some() {
                    Some((false, self.trace_cycle(self.next(hu))))
                } else {
                    None
                }
            }
            _ => None,
        };
        let u = self.get_or_add_vertex(&seg.a);
        let v = self.get_or_add_vertex(&seg.b);
        let e = self.edges.len() as EdgeId;
        self.edges.push(EdgeRec { seg: seg.clone(), va: u, vb: v, flag: Flag::Null });
        self.handles.extend([None, None]);
        let s = self.dsu.make_set();
        debug_assert_eq!(s, e);
        let (duv, dvu) = (2 * e, 2 * e + 1);
        for h in [plan.h_u, plan.h_v].into_iter().flatten() {
            self.dsu.union(e, edge_of(h));
        }
        self.verts[u as usize].rot.insert(Dir::between(&seg.a, &seg.b), duv);
        self.verts[v as usize].rot.insert(Dir::between(&seg.b, &seg.a), dvu);
        let event = match plan.class {
            InsertionClass::Isolated => FaceEvent::NoNewFace,
            InsertionClass::OneEndpointAttached => {
                let (h, first, second) = match plan.h_u {
                    Some(h) => (h, duv, dvu),
                    None => (plan.h_v.unwrap(), dvu, duv),
                };
                if let Some(q) = self.queue_of_dir(h) {
                    self.splice_after(q, h, &[first, second]);
                    self.edges[e as usize].flag = Flag::False;
                }
                FaceEvent::NoNewFace
            }
            InsertionClass::TwoComponentsBridged => {
                if let Some((at_u, cyc)) = bridge {
                    let (h, first, last) = if at_u { (plan.h_u.unwrap(), duv, dvu) } else { (plan.h_v.unwrap(), dvu, duv) };
                    let q = self.queue_of_dir(h).unwrap();
                    let mut seq = Vec::with_capacity(cyc.len() + 2);
                    seq.push(first);
                    seq.extend_from_slice(&cyc);
                    seq.push(last);
                    self.splice_after(q, h, &seq);
                    self.edges[e as usize].flag = Flag::False;
                    for d in cyc {
                        self.set_flag(edge_of(d), Flag::False);
                    }
                }
                FaceEvent::NoNewFace
            }
            InsertionClass::SameComponent { splits_face: true, .. } => {
                self.edges[e as usize].flag = Flag::False;
                self.split_face(plan.h_u.unwrap(), plan.h_v.unwrap(), duv, dvu)
            }
            InsertionClass::SameComponent { .. } => self.enclose_face(e),
        };
        Ok((e, plan.class, event))
    }

    fn splice_after(&mut self, q: QueueId, h: DirEdge, seq: &[DirEdge]) {
        let (q, rest) = self.queues.split(q, self.handle(h)).expect("queue split");
        for &d in seq {
            self.push(q, d);
        }
        self.queues.concat(q, rest).expect("queue concat");
    }

    fn split_face(&mut self, hu: DirEdge, hv: DirEdge, duv: DirEdge, dvu: DirEdge) -> FaceEvent {
        let q = self.queue_of_dir(hu).expect("split face is bounded");
        debug_assert_eq!(self.queue_of_dir(hv), Some(q));
        self.queues.rotate_to_end(q, self.handle(hu)).expect("rotate");
        let (q1, q2) = self.queues.split(q, self.handle(hv)).expect("queue split");
        self.push(q1, dvu);
        self.push(q2, duv);
        if self.queues.min(q2) < self.queues.min(q1) {
            self.queues.swap_contents(q1, q2).expect("swap");
        }
        self.stats.face_splits += 1;
        FaceEvent::FaceSplit { old: FaceName::Bounded(q1), new: FaceName::Bounded(q2) }
    }

    fn enclose_face(&mut self, e: EdgeId) -> FaceEvent {
        let (duv, dvu) = (2 * e, 2 * e + 1);
        let mut a = vec![duv];
        let mut b = vec![dvu];
        let (mut ca, mut cb) = (duv, dvu);
        let closed_a = loop {
            ca = self.next(ca);
            if ca == duv {
                break true;
            }
            a.push(ca);
            cb = self.next(cb);
            if cb == dvu {
                break false;
            }
            b.push(cb);
        };
        let (closed, open, open_start) = if closed_a { (a, b, dvu) } else { (b, a, duv) };
        let face = if self.cycle_area2(&closed).signum() == Ordering::Greater {
            closed
        } else {
            let mut c = open;
            let mut d = self.next(*c.last().unwrap());
            while d != open_start {
                c.push(d);
                d = self.next(d);
            }
            c
        };
        debug_assert_eq!(self.cycle_area2(&face).signum(), Ordering::Greater);
        let (q, hs) = self.queues.create_from(&face);
        for (&d, h) in face.iter().zip(hs) {
            self.handles[d as usize] = Some(h);
        }
        self.stats.queue_insertions += face.len() as u64;
        self.stats.faces_created += 1;
        let mut seen: HashMap<EdgeId, u32> = HashMap::new();
        for &d in &face {
            *seen.entry(edge_of(d)).or_default() += 1;
        }
        for (&x, &n) in &seen {
            let f = if x == e {
                Flag::True
            } else if n == 2 || self.edges[x as usize].flag == Flag::True {
                Flag::False
            } else {
                Flag::True
            };
            self.set_flag(x, f);
        }
        FaceEvent::NewEnclosedFace { name: FaceName::Bounded(q), cycle: face }
    }

    /// Checks rotations, queue cycles, handles and face orientation.
    pub fn check_invariants(&self) -> Result<(), String> {
        for (v, vx) in self.verts.iter().enumerate() {
            for (k, &d) in &vx.rot {
                if self.tail(d) as usize != v || self.dir_of(d) != *k {
                    return Err(format!("rotation of vertex {v} holds stray edge {d}"));
                }
            }
        }
        for (d, h) in self.handles.iter().enumerate() {
            if let Some(h) = h {
                if self.queues.value(*h).map_err(|x| x.to_string())? != d as u32 {
                    return Err(format!("handle of directed edge {d} points elsewhere"));
                }
            }
        }
        for f in self.faces() {
            let FaceName::Bounded(q) = f else { continue };
            self.queues.check_invariants(q)?;
            let c = self.queues.to_vec(q);
            for i in 0..c.len() {
                if self.next(c[i]) != c[(i + 1) % c.len()] {
                    return Err(format!("queue {q} is not a boundary cycle at {}", c[i]));
                }
            }
            if self.cycle_area2(&c).signum() != Ordering::Greater {
                return Err(format!("queue {q} is not counterclockwise"));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seg(x1: i64, y1: i64, x2: i64, y2: i64) -> Segment {
        Segment::from_ints(x1, y1, x2, y2)
    }

    fn square() -> (Subdivision, Vec<FaceEvent>) {
        let mut s = Subdivision::new();
        let mut ev = Vec::new();
        for g in [seg(0, 0, 10, 0), seg(10, 0, 10, 10), seg(0, 10, 10, 10), seg(0, 0, 0, 10)] {
            ev.push(s.insert_edge(&g).unwrap().2);
            s.check_invariants().unwrap();
        }
        (s, ev)
    }

    #[test]
    fn first_edge_is_isolated() {
        let mut s = Subdivision::new();
        let (e, c, ev) = s.insert_edge(&seg(0, 0, 1, 0)).unwrap();
        assert_eq!((e, c, ev), (0, InsertionClass::Isolated, FaceEvent::NoNewFace));
        assert_eq!(s.interior_flag(0), Flag::Null);
        assert_eq!(s.trace_cycle(0), vec![0, 1]);
    }

    #[test]
    fn closing_a_square_encloses_a_face() {
        let (s, ev) = square();
        let FaceEvent::NewEnclosedFace { name, cycle } = &ev[3] else { panic!("{:?}", ev[3]) };
        assert_eq!(cycle.len(), 4);
        assert!((0..4).all(|e| s.interior_flag(e) == Flag::True));
        // bottom edge runs left to right, interior to its left
        assert_eq!(s.face_name_of_directed_edge(0), Some(*name));
        assert_eq!(s.face_name_of_directed_edge(1), None);
        assert_eq!(s.trace_cycle(0).len(), 4);
    }

    #[test]
    fn diagonal_splits_the_square() {
        let (mut s, _) = square();
        assert_eq!(
            s.classify_insertion(&seg(0, 0, 10, 10)).unwrap(),
            InsertionClass::SameComponent { splits_face: true, encloses_new_face: false }
        );
        let (e, _, ev) = s.insert_edge(&seg(0, 0, 10, 10)).unwrap();
        let FaceEvent::FaceSplit { old, new } = ev else { panic!() };
        assert_ne!(old, new);
        assert_eq!(s.face_cycle(old).len(), 3);
        assert_eq!(s.face_cycle(new).len(), 3);
        assert_eq!(s.interior_flag(e), Flag::False);
        let names = [s.face_name_of_directed_edge(2 * e), s.face_name_of_directed_edge(2 * e + 1)];
        assert!(names[0].is_some() && names[1].is_some() && names[0] != names[1]);
        // the half holding directed edge 0 keeps the old name
        assert_eq!(s.face_name_of_directed_edge(0), Some(old));
        s.check_invariants().unwrap();
    }

    #[test]
    fn bridge_to_inner_segment_grows_queue() {
        let (mut s, ev) = square();
        let FaceEvent::NewEnclosedFace { name, .. } = ev[3].clone() else { panic!() };
        s.insert_edge(&seg(3, 5, 6, 5)).unwrap();
        assert_eq!(s.classify_insertion(&seg(0, 0, 3, 5)).unwrap(), InsertionClass::TwoComponentsBridged);
        let (e, _, ev) = s.insert_edge(&seg(0, 0, 3, 5)).unwrap();
        assert_eq!(ev, FaceEvent::NoNewFace);
        assert_eq!(s.face_cycle(name).len(), 4 + 2 + 2);
        assert_eq!(s.interior_flag(e), Flag::False);
        assert_eq!(s.interior_flag(4), Flag::False);
        s.check_invariants().unwrap();
    }

    #[test]
    fn antenna_cycle_has_six_steps() {
        let (mut s, _) = square();
        s.insert_edge(&seg(10, 10, 15, 12)).unwrap();
        assert_eq!(s.trace_cycle(1).len(), 6);
        assert_eq!(s.interior_flag(4), Flag::Null);
        let inner = s.insert_edge(&seg(0, 0, 4, 3)).unwrap();
        assert_eq!(inner.1, InsertionClass::OneEndpointAttached);
        assert_eq!(s.interior_flag(inner.0), Flag::False);
        s.check_invariants().unwrap();
    }

    #[test]
    fn vertex_on_edges() {
        let mut s = Subdivision::new();
        s.insert_edge(&seg(0, 0, 10, 0)).unwrap();
        s.insert_vertex(&Point::new(5, 0), Some(0)).unwrap();
        assert_eq!(s.edge_count(), 2);
        assert_eq!((s.interior_flag(0), s.interior_flag(1)), (Flag::Null, Flag::Null));
        assert_eq!(s.insert_vertex(&Point::new(5, 0), None), Err(SubdivisionError::DuplicateVertex(Point::new(5, 0))));

        let (mut s, ev) = square();
        let FaceEvent::NewEnclosedFace { name, .. } = ev[3].clone() else { panic!() };
        s.insert_vertex(&Point::new(4, 0), Some(0)).unwrap();
        assert_eq!(s.face_cycle(name).len(), 5);
        assert_eq!((s.interior_flag(0), s.interior_flag(4)), (Flag::True, Flag::True));
        assert_eq!(s.component(4), s.component(0));
        s.check_invariants().unwrap();
        assert!(s.insert_vertex(&Point::new(4, 1), Some(0)).is_err());
    }

    #[test]
    fn overlapping_edge_is_rejected() {
        let mut s = Subdivision::new();
        s.insert_edge(&seg(0, 0, 10, 0)).unwrap();
        assert!(matches!(s.insert_edge(&seg(0, 0, 10, 0)), Err(SubdivisionError::Overlap(_))));
        let p = Point::new(1, 1);
        assert_eq!(s.insert_edge(&Segment { a: p.clone(), b: p }), Err(SubdivisionError::Degenerate));
    }

    #[test]
    fn hole_then_enclosing_ring() {
        // inner square first, then an outer square around it
        let mut s = Subdivision::new();
        for g in [seg(4, 4, 6, 4), seg(6, 4, 6, 6), seg(4, 6, 6, 6), seg(4, 4, 4, 6)] {
            s.insert_edge(&g).unwrap();
        }
        for g in [seg(0, 0, 10, 0), seg(10, 0, 10, 10), seg(0, 10, 10, 10), seg(0, 0, 0, 10)] {
            s.insert_edge(&g).unwrap();
        }
        assert_eq!(s.faces().len(), 2);
        let (_, c, _) = s.insert_edge(&seg(0, 0, 4, 4)).unwrap();
        assert_eq!(c, InsertionClass::TwoComponentsBridged);
        assert!((0..4).all(|e| s.interior_flag(e) == Flag::False));
        s.check_invariants().unwrap();
    }
}
