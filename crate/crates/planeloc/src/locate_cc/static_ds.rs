//! Static ray-shooting structure for one subset of segments, stored as
//! per-backbone-node pieces.

use std::cmp::Ordering;
use std::collections::HashMap;

use crate::blocks::cascade::{CascadeTree, Strategy};
use crate::blocks::pst::Pst;
use crate::blocks::wbb::NodeId;
use crate::geom::{cmp_hits, cmp_on_line, Point, Segment, Side};

pub type LogId = u32;

/// `s` is hit by the upward ray from `q`; with `strict` off, also when `q`
/// lies on `s`. The caller guarantees that `s` spans `q`.
pub(crate) fn above(s: &Segment, q: &Point, strict: bool) -> bool {
    match s.cmp_point(q) {
        Ordering::Less => true,
        Ordering::Equal => !strict,
        Ordering::Greater => false,
    }
}

fn neg(p: &Point) -> Point {
    Point { x: -&p.x, y: -&p.y }
}

/// Order along the sheared vertical line through `wall`.
pub(crate) fn wall_cmp(segs: &[Segment], wall: &Point, a: LogId, b: LogId) -> Ordering {
    cmp_on_line(&segs[a as usize], &segs[b as usize], wall, Side::L).then(a.cmp(&b))
}

pub(crate) fn merge_sorted<T: Copy>(x: &[T], y: &[T], cmp: impl Fn(T, T) -> Ordering) -> Vec<T> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() && j < y.len() {
        if cmp(x[i], y[j]) != Ordering::Greater {
            out.push(x[i]);
            i += 1;
        } else {
            out.push(y[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&x[i..]);
    out.extend_from_slice(&y[j..]);
    out
}

/// Segments crossing one wall, all reaching into the same child. Left
/// sides become active once their left endpoint is passed, right sides
/// while their right endpoint is ahead.
#[derive(Debug, Clone)]
pub(crate) struct SideList {
    wall: Point,
    right: bool,
    items: Vec<LogId>,
    blocks: Vec<Pst<LogId, Point>>,
    winner: Vec<LogId>,
    winners: Pst<u32, Point>,
}

impl SideList {
    fn prio(&self, segs: &[Segment], l: LogId) -> Point {
        let s = &segs[l as usize];
        if self.right {
            s.b.clone()
        } else {
            neg(&s.a)
        }
    }

    /// `items` must be sorted along the wall.
    pub(crate) fn build(wall: Point, right: bool, items: Vec<LogId>, segs: &[Segment], bound: usize) -> SideList {
        let mut out = SideList {
            wall,
            right,
            items,
            blocks: Vec::new(),
            winner: Vec::new(),
            winners: Pst::build_sorted(Vec::new(), |_| Point::new(0, 0)),
        };
        let mut prios = Vec::new();
        for chunk in out.items.chunks(bound.max(1)) {
            let blk = Pst::build_sorted(chunk.to_vec(), |&l| out.prio(segs, l));
            let w = *chunk.iter().max_by(|&&x, &&y| out.prio(segs, x).cmp(&out.prio(segs, y))).unwrap();
            prios.push(blk.root_key().unwrap().clone());
            out.blocks.push(blk);
            out.winner.push(w);
        }
        out.winners = Pst::build_sorted((0..out.blocks.len() as u32).collect(), |&b| prios[b as usize].clone());
        out
    }

    pub(crate) fn merge(a: &SideList, b: &SideList, segs: &[Segment], bound: usize) -> SideList {
        debug_assert!(a.wall == b.wall && a.right == b.right);
        let items = merge_sorted(&a.items, &b.items, |x, y| wall_cmp(segs, &a.wall, x, y));
        SideList::build(a.wall.clone(), a.right, items, segs, bound)
    }

    pub(crate) fn items(&self) -> &[LogId] {
        &self.items
    }

    pub(crate) fn query(&self, segs: &[Segment], q: &Point, strict: bool) -> Option<LogId> {
        if self.items.is_empty() {
            return None;
        }
        let thr = if self.right { q.clone() } else { neg(q) };
        let ab = |l: &LogId| above(&segs[*l as usize], q, strict);
        let wab = |b: &u32| ab(&self.winner[*b as usize]);
        let below = self.winners.highest_below(&thr, &wab);
        let over = self.winners.lowest(&thr, &wab);
        for b in [below, over].into_iter().flatten() {
            let blk = &self.blocks[b];
            if let Some(i) = blk.lowest(&thr, &ab) {
                return Some(*blk.item(i));
            }
        }
        None
    }

    /// Blocks respect the bound and each winner leads its block.
    pub(crate) fn audit(&self, segs: &[Segment], bound: usize) -> Result<(), String> {
        for (blk, &w) in self.blocks.iter().zip(&self.winner) {
            if blk.len() > bound {
                return Err(format!("block of {} exceeds bound {bound}", blk.len()));
            }
            let wp = self.prio(segs, w);
            if blk.items().iter().any(|&l| self.prio(segs, l) > wp) {
                return Err("winner is not extreme in its block".into());
            }
            if !blk.check_heap() {
                return Err("block heap order broken".into());
            }
        }
        if self.items.windows(2).any(|w| wall_cmp(segs, &self.wall, w[0], w[1]) != Ordering::Less) {
            return Err("side list out of wall order".into());
        }
        Ok(())
    }
}

/// Segment tree over the children of one backbone node; each node lists
/// the segments spanning its whole range, in wall order at its left end.
#[derive(Debug, Clone)]
pub(crate) struct MidSeg {
    k: usize,
    /// Child range `[lo, hi]` and the two sub-nodes of every tree node.
    range: Vec<(usize, usize)>,
    kids: Vec<Option<(usize, usize)>>,
    lists: CascadeTree<LogId>,
}

impl MidSeg {
    fn shape(k: usize) -> (Vec<(usize, usize)>, Vec<Option<(usize, usize)>>, Vec<Option<usize>>) {
        let mut range = Vec::new();
        let mut kids = Vec::new();
        let mut parent = Vec::new();
        fn go(
            lo: usize,
            hi: usize,
            par: Option<usize>,
            range: &mut Vec<(usize, usize)>,
            kids: &mut Vec<Option<(usize, usize)>>,
            parent: &mut Vec<Option<usize>>,
        ) -> usize {
            let v = range.len();
            range.push((lo, hi));
            kids.push(None);
            parent.push(par);
            if lo < hi {
                let mid = (lo + hi) / 2;
                let l = go(lo, mid, Some(v), range, kids, parent);
                let r = go(mid + 1, hi, Some(v), range, kids, parent);
                kids[v] = Some((l, r));
            }
            v
        }
        go(0, k - 1, None, &mut range, &mut kids, &mut parent);
        (range, kids, parent)
    }

    fn cover(&self, v: usize, lo: usize, hi: usize, out: &mut Vec<usize>) {
        let (a, b) = self.range[v];
        if hi < a || b < lo {
            return;
        }
        if lo <= a && b <= hi {
            out.push(v);
            return;
        }
        if let Some((l, r)) = self.kids[v] {
            self.cover(l, lo, hi, out);
            self.cover(r, lo, hi, out);
        }
    }

    fn assemble(k: usize, native: Vec<Vec<LogId>>, walls: &[Point], segs: &[Segment], strategy: Strategy) -> MidSeg {
        let (range, kids, parent) = MidSeg::shape(k);
        let lists = CascadeTree::build(parent, native, strategy, |v, &a, &b| wall_cmp(segs, &walls[range[v].0], a, b));
        MidSeg { k, range, kids, lists }
    }

    /// `spans` holds each segment with its inclusive child range.
    pub(crate) fn build(
        k: usize,
        spans: &[(LogId, usize, usize)],
        walls: &[Point],
        segs: &[Segment],
        strategy: Strategy,
    ) -> MidSeg {
        let (range, kids, _) = MidSeg::shape(k);
        let probe =
            MidSeg { k, range, kids, lists: CascadeTree::build(Vec::new(), Vec::new(), strategy, |_, _, _| Ordering::Equal) };
        let mut native: Vec<Vec<LogId>> = vec![Vec::new(); probe.range.len()];
        let mut at = Vec::new();
        for &(l, lo, hi) in spans {
            at.clear();
            probe.cover(0, lo, hi, &mut at);
            for &v in &at {
                native[v].push(l);
            }
        }
        for (v, list) in native.iter_mut().enumerate() {
            let w = &walls[probe.range[v].0];
            list.sort_by(|&a, &b| wall_cmp(segs, w, a, b));
        }
        MidSeg::assemble(k, native, walls, segs, strategy)
    }

    pub(crate) fn merge(a: &MidSeg, b: &MidSeg, walls: &[Point], segs: &[Segment], strategy: Strategy) -> MidSeg {
        debug_assert_eq!(a.k, b.k);
        let native = (0..a.range.len())
            .map(|v| {
                let w = &walls[a.range[v].0];
                merge_sorted(a.lists.native(v), b.lists.native(v), |x, y| wall_cmp(segs, w, x, y))
            })
            .collect();
        MidSeg::assemble(a.k, native, walls, segs, strategy)
    }

    pub(crate) fn size(&self) -> usize {
        (0..self.range.len()).map(|v| self.lists.native(v).len()).sum()
    }

    /// Lowest segment hit above `q`, which lies in child `c`.
    pub(crate) fn query(&self, segs: &[Segment], q: &Point, c: usize, strict: bool) -> Option<LogId> {
        let mut path = vec![0usize];
        while let Some((l, r)) = self.kids[*path.last().unwrap()] {
            path.push(if c <= self.range[l].1 { l } else { r });
        }
        let found = self.lists.search_path(&path, |_, &l| !above(&segs[l as usize], q, strict));
        let mut best: Option<LogId> = None;
        for (&v, idx) in path.iter().zip(found) {
            let list = self.lists.native(v);
            let next = idx.map_or(0, |i| i + 1);
            if let Some(&l) = list.get(next) {
                best = Some(match best {
                    Some(b) if cmp_hits(&segs[b as usize], &segs[l as usize], q) != Ordering::Greater => b,
                    _ => l,
                });
            }
        }
        best
    }
}

/// Pieces of one subset stored at one backbone node.
#[derive(Debug, Clone, Default)]
pub(crate) struct DsNode {
    /// Segment with the children holding its left and right endpoints.
    pub(crate) members: Vec<(LogId, usize, usize)>,
    left: HashMap<usize, SideList>,
    right: HashMap<usize, SideList>,
    mid: Option<MidSeg>,
}

pub(crate) struct Env<'a> {
    pub segs: &'a [Segment],
    /// First key of every child of the node.
    pub walls: &'a [Point],
    pub bound: usize,
    pub strategy: Strategy,
}

impl DsNode {
    pub(crate) fn build(members: Vec<(LogId, usize, usize)>, env: &Env) -> DsNode {
        let mut lefts: HashMap<usize, Vec<LogId>> = HashMap::new();
        let mut rights: HashMap<usize, Vec<LogId>> = HashMap::new();
        let mut spans = Vec::new();
        for &(l, a, b) in &members {
            debug_assert!(a < b);
            lefts.entry(a).or_default().push(l);
            rights.entry(b).or_default().push(l);
            if b > a + 1 {
                spans.push((l, a + 1, b - 1));
            }
        }
        let side = |map: HashMap<usize, Vec<LogId>>, right: bool| {
            map.into_iter()
                .map(|(c, mut items)| {
                    let wall = env.walls[if right { c } else { c + 1 }].clone();
                    items.sort_by(|&x, &y| wall_cmp(env.segs, &wall, x, y));
                    (c, SideList::build(wall, right, items, env.segs, env.bound))
                })
                .collect()
        };
        let mid = (!spans.is_empty()).then(|| MidSeg::build(env.walls.len(), &spans, env.walls, env.segs, env.strategy));
        DsNode { left: side(lefts, false), right: side(rights, true), mid, members }
    }

    pub(crate) fn merge(x: &DsNode, y: &DsNode, env: &Env) -> DsNode {
        let side = |p: &HashMap<usize, SideList>, r: &HashMap<usize, SideList>| {
            let mut out = p.clone();
            for (c, s) in r {
                let merged = match out.get(c) {
                    Some(t) => SideList::merge(t, s, env.segs, env.bound),
                    None => s.clone(),
                };
                out.insert(*c, merged);
            }
            out
        };
        let mid = match (&x.mid, &y.mid) {
            (Some(a), Some(b)) => Some(MidSeg::merge(a, b, env.walls, env.segs, env.strategy)),
            (a, b) => a.clone().or_else(|| b.clone()),
        };
        let mut members = x.members.clone();
        members.extend_from_slice(&y.members);
        DsNode { left: side(&x.left, &y.left), right: side(&x.right, &y.right), mid, members }
    }

    /// Candidates for a query point in child `c`.
    pub(crate) fn query(&self, segs: &[Segment], q: &Point, c: usize, strict: bool, out: &mut Vec<LogId>) {
        for map in [&self.left, &self.right] {
            if let Some(s) = map.get(&c) {
                out.extend(s.query(segs, q, strict));
            }
        }
        if let Some(m) = &self.mid {
            out.extend(m.query(segs, q, c, strict));
        }
    }

    /// Entries across all lists: each member appears in at most one left
    /// list, one right list and the middle tree.
    pub(crate) fn size(&self) -> usize {
        self.left.values().chain(self.right.values()).map(|s| s.items().len()).sum::<usize>()
            + self.mid.as_ref().map_or(0, MidSeg::size)
    }

    pub(crate) fn audit(&self, segs: &[Segment], bound: usize) -> Result<(), String> {
        for s in self.left.values().chain(self.right.values()) {
            s.audit(segs, bound)?;
        }
        Ok(())
    }
}

/// One subset with its static structure.
#[derive(Debug, Clone, Default)]
pub(crate) struct Subset {
    pub(crate) members: Vec<LogId>,
    pub(crate) nodes: HashMap<NodeId, DsNode>,
}
