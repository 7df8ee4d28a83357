//! Lowest stabbed trapezoid over a growing set of trapezoids whose upper
//! and lower sides never cross.
//!
//! A base tree of fan-out `f` over the x-coordinates of trapezoid sides
//! stores every trapezoid at the node where its left and right sides fall
//! into different children `a < b`. The part inside child `a` goes to a left
//! piece anchored on the wall between `a` and `a + 1`, the part inside `b`
//! to a right piece anchored on the wall left of `b`, and the children in
//! between to a middle segment tree. Each piece orders the distinct sides
//! crossing its wall and keeps, per segment-tree node, a staircase of
//! trapezoids that are not dominated by one starting further out.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

use crate::blocks::cascade::{CascadeTree, Strategy};
use crate::blocks::dynseg::{DynSeg, Payload, SegCtx};
use crate::blocks::wbb::{NodeId, SplitEvent, Wbb};
use crate::geom::{cmp_slope, cmp_y_at, point_in_trapezoid, Coord, EdgeId, Point, Segment, Trapezoid};

pub type TrapId = u32;

pub const DEFAULT_FANOUT: usize = 8;

/// Orders sides by height on the wall `x`, then by slope on the chosen
/// side of the wall; collinear sides compare equal.
#[derive(Debug, Clone)]
struct WallCtx {
    x: Coord,
    right: bool,
    sides: Vec<Segment>,
}

impl SegCtx<u32> for WallCtx {
    fn cmp(&self, a: &u32, b: &u32) -> Ordering {
        let (s, t) = (&self.sides[*a as usize], &self.sides[*b as usize]);
        cmp_y_at(s, t, &self.x).then_with(|| if self.right { cmp_slope(s, t) } else { cmp_slope(t, s) })
    }
}

impl WallCtx {
    fn new(x: Coord, right: bool) -> WallCtx {
        WallCtx { x, right, sides: Vec::new() }
    }

    /// `side` meets or passes above `q`.
    fn at_or_above(&self, side: u32, q: &Point) -> bool {
        self.sides[side as usize].cmp_point(q) != Ordering::Greater
    }

    fn above(&self, side: u32, q: &Point) -> bool {
        self.sides[side as usize].cmp_point(q) == Ordering::Less
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Entry {
    top: u32,
    owner: EdgeId,
    id: TrapId,
}

fn rank(ctx: &WallCtx, a: &Entry, b: &Entry) -> Ordering {
    ctx.cmp(&a.top, &b.top).then(a.owner.cmp(&b.owner)).then(a.id.cmp(&b.id))
}

/// Entries keyed by activation coordinate with strictly improving rank.
#[derive(Debug, Clone, Default)]
struct Staircase {
    steps: BTreeMap<Coord, Entry>,
    dominated: u64,
}

impl Payload<WallCtx> for Staircase {
    type Item = (Coord, Entry);

    fn add(&mut self, (x, e): &(Coord, Entry), ctx: &WallCtx) {
        if let Some((_, p)) = self.steps.range(..=x).next_back() {
            if rank(ctx, p, e) != Ordering::Greater {
                self.dominated += 1;
                return;
            }
        }
        let worse: Vec<Coord> =
            self.steps.range(x..).take_while(|(_, s)| rank(ctx, s, e) != Ordering::Less).map(|(k, _)| k.clone()).collect();
        self.dominated += worse.len() as u64;
        for k in worse {
            self.steps.remove(&k);
        }
        self.steps.insert(x.clone(), *e);
    }
}

impl Staircase {
    fn best(&self, thr: &Coord, strict: bool) -> Option<&Entry> {
        if strict {
            self.steps.range(..thr).next_back().map(|(_, e)| e)
        } else {
            self.steps.range(..=thr).next_back().map(|(_, e)| e)
        }
    }

    fn is_monotone(&self, ctx: &WallCtx) -> bool {
        let v: Vec<&Entry> = self.steps.values().collect();
        v.windows(2).all(|w| rank(ctx, w[0], w[1]) == Ordering::Greater)
    }
}

/// Lowest-rank entry over all trapezoids at a node.
#[derive(Debug, Clone, Default)]
struct MinEntry(Option<Entry>);

impl Payload<WallCtx> for MinEntry {
    type Item = Entry;

    fn add(&mut self, e: &Entry, ctx: &WallCtx) {
        if self.0.as_ref().is_none_or(|m| rank(ctx, e, m) == Ordering::Less) {
            self.0 = Some(*e);
        }
    }
}

fn keep_min(ctx: &WallCtx, slot: &mut Option<Entry>, e: Option<&Entry>) {
    if let Some(e) = e {
        if slot.as_ref().is_none_or(|m| rank(ctx, e, m) == Ordering::Less) {
            *slot = Some(*e);
        }
    }
}

/// Registers `side` in the key set of `seg`, merging it with a collinear
/// side already present; returns the key.
fn intern_side<A: Clone + Ord, P: Payload<WallCtx>>(seg: &mut DynSeg<u32, A, P, WallCtx>, side: &Segment, aux: A) -> u32 {
    let sides = &mut seg.ctx_mut().sides;
    sides.push(side.clone());
    let tmp = (sides.len() - 1) as u32;
    if let Some(&k) = seg.find(&tmp) {
        seg.ctx_mut().sides.pop();
        seg.lower_aux(&k, aux);
        k
    } else {
        seg.insert_key(tmp, aux);
        tmp
    }
}

/// Frozen copy of a piece's staircases for cascaded search.
#[derive(Debug, Clone)]
struct Snapshot {
    tree: CascadeTree<Coord>,
    index: HashMap<u32, usize>,
    entries: Vec<Vec<Entry>>,
}

/// Trapezoids crossing one wall from one side. Activation keys are the
/// left x (left pieces) or the negated right x (right pieces).
#[derive(Debug, Clone)]
struct SidePiece {
    seg: DynSeg<u32, Coord, Staircase, WallCtx>,
    snapshot: Option<Snapshot>,
    dirty: u64,
    entries: u64,
}

impl SidePiece {
    fn new(wall: Coord, right: bool) -> SidePiece {
        SidePiece { seg: DynSeg::new(WallCtx::new(wall, right)), snapshot: None, dirty: 0, entries: 0 }
    }

    fn insert(&mut self, t: &Trapezoid, id: TrapId, act: Coord, strategy: Strategy) {
        let b = intern_side(&mut self.seg, &t.bottom, act.clone());
        let top = intern_side(&mut self.seg, &t.top, act.clone());
        let e = Entry { top, owner: t.owner_edge, id };
        self.seg.insert_interval(Some(b), top, (act, e));
        self.entries += 1;
        self.dirty += 1;
        self.snapshot = None;
        if strategy == Strategy::Cascading && self.dirty * 8 >= self.entries {
            self.refresh(strategy);
        }
    }

    fn refresh(&mut self, strategy: Strategy) {
        if self.snapshot.is_some() || strategy != Strategy::Cascading {
            return;
        }
        let mut parent = Vec::new();
        let mut native = Vec::new();
        let mut entries = Vec::new();
        let mut index = HashMap::new();
        let mut stack = vec![(self.seg.root(), None)];
        while let Some((v, p)) = stack.pop() {
            let i = parent.len();
            index.insert(v, i);
            parent.push(p);
            let st = &self.seg.view(v).payload.steps;
            native.push(st.keys().cloned().collect::<Vec<_>>());
            entries.push(st.values().copied().collect::<Vec<_>>());
            if let Some((l, r)) = self.seg.children(v) {
                stack.push((r, Some(i)));
                stack.push((l, Some(i)));
            }
        }
        let tree = CascadeTree::build(parent, native, strategy, |_, a: &Coord, b: &Coord| a.cmp(b));
        self.snapshot = Some(Snapshot { tree, index, entries });
        self.dirty = 0;
    }

    fn leftmost_active(&self, v: u32, thr: &Coord) -> Option<u32> {
        let nv = self.seg.view(v);
        if nv.aux_min.is_none_or(|a| a > thr) {
            return None;
        }
        match self.seg.children(v) {
            None => nv.key.copied(),
            Some((l, r)) => self.leftmost_active(l, thr).or_else(|| self.leftmost_active(r, thr)),
        }
    }

    /// First active side in order satisfying `pred`, which is monotone
    /// over active sides.
    fn first_where(&self, v: u32, thr: &Coord, pred: &impl Fn(u32) -> bool) -> Option<u32> {
        let nv = self.seg.view(v);
        if nv.aux_min.is_none_or(|a| a > thr) {
            return None;
        }
        let Some((l, r)) = self.seg.children(v) else {
            return nv.key.copied().filter(|&k| pred(k));
        };
        match self.leftmost_active(r, thr) {
            Some(k) if !pred(k) => self.first_where(r, thr, pred),
            k => self.first_where(l, thr, pred).or(k),
        }
    }

    /// Best entries stabbed by the side `e`, over all activated trapezoids
    /// and over those activated strictly before `thr`.
    fn stab(&self, e: u32, thr: &Coord, out: &mut [Option<Entry>; 2]) {
        let ctx = self.seg.ctx();
        let path = self.seg.path(&e);
        if let Some(s) = &self.snapshot {
            let cpath: Vec<usize> = path.iter().map(|v| s.index[v]).collect();
            let le = s.tree.search_path(&cpath, |_, x| x <= thr);
            let lt = s.tree.search_path(&cpath, |_, x| x < thr);
            for (k, &c) in cpath.iter().enumerate() {
                keep_min(ctx, &mut out[0], le[k].map(|i| &s.entries[c][i]));
                keep_min(ctx, &mut out[1], lt[k].map(|i| &s.entries[c][i]));
            }
            return;
        }
        for v in path {
            let st = &self.seg.view(v).payload;
            keep_min(ctx, &mut out[0], st.best(thr, false));
            keep_min(ctx, &mut out[1], st.best(thr, true));
        }
    }

    fn query(&self, q: &Point, thr: &Coord, out: &mut Vec<TrapId>) {
        let ctx = self.seg.ctx();
        let root = self.seg.root();
        let below = self.first_where(root, thr, &|k| ctx.at_or_above(k, q));
        let strictly = self.first_where(root, thr, &|k| ctx.above(k, q));
        let mut best = [None, None];
        for e in [below, strictly].into_iter().flatten() {
            self.stab(e, thr, &mut best);
        }
        out.extend(best.iter().flatten().map(|e| e.id));
    }

    fn audit(&self) -> Result<(), String> {
        let ctx = self.seg.ctx();
        if self.seg.payloads().iter().all(|p| p.is_monotone(ctx)) {
            Ok(())
        } else {
            Err("staircase lost monotonicity".into())
        }
    }
}

/// One node of a middle segment tree: every stored trapezoid spans the
/// node's whole x-range, so all its sides are always active.
#[derive(Debug, Clone)]
struct MidNode {
    seg: DynSeg<u32, (), MinEntry, WallCtx>,
}

impl MidNode {
    fn first_where(&self, pred: impl Fn(u32) -> bool) -> Option<u32> {
        let mut v = self.seg.root();
        loop {
            let nv = self.seg.view(v);
            match self.seg.children(v) {
                None => return nv.key.copied().filter(|&k| pred(k)),
                Some((l, r)) => v = if nv.key.is_some_and(|&k| pred(k)) { l } else { r },
            }
        }
    }

    fn query(&self, q: &Point, out: &mut Vec<TrapId>) {
        let ctx = self.seg.ctx();
        let mut best = None;
        let below = self.first_where(|k| ctx.at_or_above(k, q));
        let strictly = self.first_where(|k| ctx.above(k, q));
        for e in [below, strictly].into_iter().flatten() {
            for v in self.seg.path(&e) {
                keep_min(ctx, &mut best, self.seg.view(v).payload.0.as_ref());
            }
        }
        out.extend(best.map(|e| e.id));
    }
}

/// Segment tree over the child indices of one base node.
#[derive(Debug, Clone)]
struct MidTree {
    k: usize,
    nodes: HashMap<usize, MidNode>,
}

impl MidTree {
    fn insert(&mut self, walls: &[Coord], lo: usize, hi: usize, t: &Trapezoid, e: Entry) {
        self.place(1, 0, self.k - 1, lo, hi, walls, t, e);
    }

    #[allow(clippy::too_many_arguments)]
    fn place(&mut self, u: usize, nlo: usize, nhi: usize, lo: usize, hi: usize, walls: &[Coord], t: &Trapezoid, e: Entry) {
        if hi < nlo || nhi < lo {
            return;
        }
        if lo <= nlo && nhi <= hi {
            let node =
                self.nodes.entry(u).or_insert_with(|| MidNode { seg: DynSeg::new(WallCtx::new(walls[nlo].clone(), true)) });
            let b = intern_side(&mut node.seg, &t.bottom, ());
            let top = intern_side(&mut node.seg, &t.top, ());
            node.seg.insert_interval(Some(b), top, Entry { top, ..e });
            return;
        }
        let mid = (nlo + nhi) / 2;
        self.place(2 * u, nlo, mid, lo, hi, walls, t, e);
        self.place(2 * u + 1, mid + 1, nhi, lo, hi, walls, t, e);
    }

    fn query(&self, i: usize, q: &Point, out: &mut Vec<TrapId>) {
        let (mut u, mut lo, mut hi) = (1, 0, self.k - 1);
        loop {
            if let Some(n) = self.nodes.get(&u) {
                n.query(q, out);
            }
            if lo == hi {
                return;
            }
            let mid = (lo + hi) / 2;
            if i <= mid {
                (u, hi) = (2 * u, mid);
            } else {
                (u, lo) = (2 * u + 1, mid + 1);
            }
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StabStats {
    pub trapezoids: u64,
    pub base_splits: u64,
    pub base_nodes: u64,
    pub piece_slots: u64,
    pub dominated_deletions: u64,
    /// Largest number of base nodes holding one trapezoid.
    pub max_nodes_per_trapezoid: u64,
}

#[derive(Debug, Clone)]
pub struct StabLowestIndex {
    strategy: Strategy,
    base: Wbb<Coord>,
    traps: Vec<Trapezoid>,
    stored: HashMap<NodeId, Vec<TrapId>>,
    left: HashMap<NodeId, HashMap<usize, SidePiece>>,
    right: HashMap<NodeId, HashMap<usize, SidePiece>>,
    mid: HashMap<NodeId, MidTree>,
    corners: HashMap<Point, Vec<TrapId>>,
}

impl Default for StabLowestIndex {
    fn default() -> Self {
        StabLowestIndex::new(DEFAULT_FANOUT, Strategy::default())
    }
}

impl StabLowestIndex {
    pub fn new(f: usize, strategy: Strategy) -> StabLowestIndex {
        StabLowestIndex {
            strategy,
            base: Wbb::new(f),
            traps: Vec::new(),
            stored: HashMap::new(),
            left: HashMap::new(),
            right: HashMap::new(),
            mid: HashMap::new(),
            corners: HashMap::new(),
        }
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    pub fn len(&self) -> usize {
        self.traps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.traps.is_empty()
    }

    pub fn trapezoid(&self, id: TrapId) -> &Trapezoid {
        &self.traps[id as usize]
    }

    pub fn trapezoids(&self) -> &[Trapezoid] {
        &self.traps
    }

    /// Adds `t`, whose sides must cross no stored side.
    pub fn insert(&mut self, t: Trapezoid) -> TrapId {
        assert!(t.xl < t.xr, "trapezoid must have positive width");
        let id = self.traps.len() as TrapId;
        for p in [Point { x: t.xl.clone(), y: t.top.y_at(&t.xl) }, Point { x: t.xr.clone(), y: t.top.y_at(&t.xr) }] {
            self.corners.entry(p).or_default().push(id);
        }
        for k in [t.xl.clone(), t.xr.clone()] {
            let mut events: Vec<SplitEvent> = Vec::new();
            let fresh = self.base.insert(k.clone(), |_, ev| events.push(ev.clone()));
            for ev in &events {
                self.on_split(ev);
            }
            if fresh {
                // the new leaf shifts child indices at its parent
                let path = self.base.path(&k);
                if path.len() >= 2 {
                    let parent = path[path.len() - 2];
                    self.on_split(&SplitEvent { parent, ..Default::default() });
                }
            }
        }
        self.traps.push(t);
        self.place(id);
        id
    }

    fn on_split(&mut self, ev: &SplitEvent) {
        let mut moved = Vec::new();
        for &w in ev.removed.iter().chain([&ev.parent]) {
            moved.extend(self.stored.remove(&w).unwrap_or_default());
            self.left.remove(&w);
            self.right.remove(&w);
            self.mid.remove(&w);
        }
        moved.sort_unstable();
        for id in moved {
            self.place(id);
        }
    }

    fn place(&mut self, id: TrapId) {
        let t = &self.traps[id as usize];
        let mut v = self.base.root().expect("keys present");
        let (a, b) = loop {
            let a = self.base.child_index(v, &t.xl);
            let b = self.base.child_index(v, &t.xr);
            if a != b {
                break (a, b);
            }
            v = self.base.node(v).children[a];
        };
        let walls: Vec<Coord> = self.base.node(v).children.iter().map(|&c| self.base.node(c).first.clone()).collect();
        let strategy = self.strategy;
        self.stored.entry(v).or_default().push(id);
        self.left.entry(v).or_default().entry(a).or_insert_with(|| SidePiece::new(walls[a + 1].clone(), false)).insert(
            t,
            id,
            t.xl.clone(),
            strategy,
        );
        self.right.entry(v).or_default().entry(b).or_insert_with(|| SidePiece::new(walls[b].clone(), true)).insert(
            t,
            id,
            -t.xr.clone(),
            strategy,
        );
        if b > a + 1 {
            let k = walls.len();
            let e = Entry { top: 0, owner: t.owner_edge, id };
            self.mid.entry(v).or_insert_with(|| MidTree { k, nodes: HashMap::new() }).insert(&walls, a + 1, b - 1, t, e);
        }
    }

    /// Freezes all pieces for cascaded search.
    pub fn refresh(&mut self) {
        let s = self.strategy;
        for m in self.left.values_mut().chain(self.right.values_mut()) {
            for p in m.values_mut() {
                p.refresh(s);
            }
        }
    }

    fn better(&self, a: TrapId, b: TrapId, x: &Coord) -> bool {
        let (s, t) = (&self.traps[a as usize], &self.traps[b as usize]);
        cmp_y_at(&s.top, &t.top, x).then(s.owner_edge.cmp(&t.owner_edge)).then(a.cmp(&b)) == Ordering::Less
    }

    /// The closed trapezoid containing `q` whose top the upward ray from
    /// `q` meets first; ties go to the smaller owner edge, then id.
    pub fn query_lowest(&self, q: &Point) -> Option<(TrapId, &Trapezoid)> {
        let mut cand = Vec::new();
        if let Some(root) = self.base.root() {
            let neg = -q.x.clone();
            let mut v = root;
            while !self.base.node(v).is_leaf() {
                let i = self.base.child_index(v, &q.x);
                if let Some(p) = self.left.get(&v).and_then(|m| m.get(&i)) {
                    p.query(q, &q.x, &mut cand);
                }
                if let Some(p) = self.right.get(&v).and_then(|m| m.get(&i)) {
                    p.query(q, &neg, &mut cand);
                }
                if let Some(m) = self.mid.get(&v) {
                    m.query(i, q, &mut cand);
                }
                v = self.base.node(v).children[i];
            }
        }
        let mut best: Option<TrapId> = None;
        let consider = |id: TrapId, best: &mut Option<TrapId>| {
            if best.is_none_or(|b| self.better(id, b, &q.x)) && point_in_trapezoid(&self.traps[id as usize], q) {
                *best = Some(id);
            }
        };
        for id in cand {
            consider(id, &mut best);
        }
        // sides meeting the winner's top on this vertical, and pinched corners
        let mut probes = vec![q.clone()];
        if let Some(b) = best {
            probes.push(Point { x: q.x.clone(), y: self.traps[b as usize].top_y(&q.x) });
        }
        for p in probes {
            for &id in self.corners.get(&p).map(Vec::as_slice).unwrap_or(&[]) {
                consider(id, &mut best);
            }
        }
        best.map(|id| (id, &self.traps[id as usize]))
    }

    pub fn stats(&self) -> StabStats {
        let mut per: HashMap<TrapId, u64> = HashMap::new();
        for ids in self.stored.values() {
            for &id in ids {
                *per.entry(id).or_default() += 1;
            }
        }
        let mut s = StabStats {
            trapezoids: self.traps.len() as u64,
            base_splits: self.base.splits(),
            base_nodes: self.base.node_count() as u64,
            max_nodes_per_trapezoid: per.values().copied().max().unwrap_or(0),
            ..StabStats::default()
        };
        for m in self.left.values().chain(self.right.values()) {
            for p in m.values() {
                s.piece_slots += p.seg.slots();
                s.dominated_deletions += p.seg.payloads().iter().map(|x| x.dominated).sum::<u64>();
            }
        }
        for m in self.mid.values() {
            for n in m.nodes.values() {
                s.piece_slots += n.seg.slots();
            }
        }
        s
    }

    /// Base-tree balance and staircase monotonicity.
    pub fn check_invariants(&self) -> Result<(), String> {
        self.base.check_invariants()?;
        for m in self.left.values().chain(self.right.values()) {
            for p in m.values() {
                p.audit()?;
            }
        }
        Ok(())
    }
}
