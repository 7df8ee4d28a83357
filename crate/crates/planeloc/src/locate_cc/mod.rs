//! Vertical ray shooting restricted to one connected component.
//!
//! Edges are grouped per component into subsets of distinct power-of-two
//! sizes, each with a static structure; inserting an edge adds a singleton
//! and merges equal sizes like a binary counter. All static structures
//! share one weight-balanced backbone over the lexicographic order of the
//! edge endpoints. A second registry over all edges answers the same query
//! without the component restriction, which detects points on edges.

mod static_ds;

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

pub use static_ds::LogId;
use static_ds::{DsNode, Env, Subset};

use crate::blocks::cascade::Strategy;
use crate::blocks::dsu::DisjointSet;
use crate::blocks::wbb::{default_fanout, NodeId, SplitEvent, Wbb};
use crate::geom::{cmp_hits, ComponentId, EdgeId, Point, Segment};
use crate::subdivision::{edge_of, Subdivision};

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum LocateCcError {
    #[error("component {0} is not a live component")]
    DeadComponent(ComponentId),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LocateCcStats {
    /// Edges currently represented (vertical ones included).
    pub edges: u64,
    /// Subset merges in component registries.
    pub merges: u64,
    /// Largest number of component merges one edge took part in.
    pub merges_max_per_edge: u32,
    pub backbone_nodes: u64,
    pub backbone_splits: u64,
    /// Entries over all per-node lists of all component subsets.
    pub structure_size: u64,
    /// Segments re-placed after backbone restructuring.
    pub replacements: u64,
    /// Entries of per-node pieces rebuilt while re-placing.
    pub rebuilt: u64,
}

#[derive(Debug, Clone)]
pub struct LocateCc {
    strategy: Strategy,
    bound: usize,
    backbone: Wbb<Point>,
    /// Geometry of every logical segment.
    segs: Vec<Segment>,
    /// Sub-edges of a logical segment, keyed by their lower endpoint.
    parts: Vec<BTreeMap<Point, EdgeId>>,
    log_of_edge: Vec<LogId>,
    /// Backbone node holding each non-vertical logical segment.
    home: Vec<NodeId>,
    stored: HashMap<NodeId, Vec<LogId>>,
    comp_subset: Vec<u32>,
    glob_subset: Vec<u32>,
    subsets: Vec<Option<Subset>>,
    free: Vec<u32>,
    groups: DisjointSet,
    registry: HashMap<LogId, Vec<u32>>,
    global: Vec<u32>,
    verticals: BTreeMap<Point, LogId>,
    merge_count: Vec<u32>,
    stats: LocateCcStats,
}

impl Default for LocateCc {
    fn default() -> Self {
        LocateCc::new(1 << 16, Strategy::default())
    }
}

/// `ceil(log2 n)^2`, at least 1.
pub fn block_bound(n_cap: usize) -> usize {
    let lg = usize::BITS - n_cap.max(2).saturating_sub(1).leading_zeros();
    (lg as usize * lg as usize).max(1)
}

impl LocateCc {
    /// Sized for about `n_cap` edges: fan-out and block bound derive from it.
    pub fn new(n_cap: usize, strategy: Strategy) -> LocateCc {
        LocateCc::with_params(default_fanout(n_cap), block_bound(n_cap), strategy)
    }

    pub fn with_params(fanout: usize, bound: usize, strategy: Strategy) -> LocateCc {
        LocateCc {
            strategy,
            bound: bound.max(1),
            backbone: Wbb::new(fanout),
            segs: Vec::new(),
            parts: Vec::new(),
            log_of_edge: Vec::new(),
            home: Vec::new(),
            stored: HashMap::new(),
            comp_subset: Vec::new(),
            glob_subset: Vec::new(),
            subsets: Vec::new(),
            free: Vec::new(),
            groups: DisjointSet::new(),
            registry: HashMap::new(),
            global: Vec::new(),
            verticals: BTreeMap::new(),
            merge_count: Vec::new(),
            stats: LocateCcStats::default(),
        }
    }

    pub fn block_bound(&self) -> usize {
        self.bound
    }

    pub fn fanout(&self) -> usize {
        self.backbone.fanout()
    }

    fn walls(&self, v: NodeId) -> Vec<Point> {
        self.backbone.node(v).children.iter().map(|&c| self.backbone.node(c).first.clone()).collect()
    }

    fn env<'a>(&'a self, walls: &'a [Point]) -> Env<'a> {
        Env { segs: &self.segs, walls, bound: self.bound, strategy: self.strategy }
    }

    /// Node where the endpoints of `l` part ways, with their child indices.
    fn locate_home(&self, l: LogId) -> (NodeId, usize, usize) {
        let s = &self.segs[l as usize];
        let mut v = self.backbone.root().expect("endpoints are keys");
        loop {
            let a = self.backbone.child_index(v, &s.a);
            let b = self.backbone.child_index(v, &s.b);
            if a != b {
                return (v, a, b);
            }
            v = self.backbone.node(v).children[a];
        }
    }

    fn alloc_subset(&mut self, s: Subset) -> u32 {
        match self.free.pop() {
            Some(i) => {
                self.subsets[i as usize] = Some(s);
                i
            }
            None => {
                self.subsets.push(Some(s));
                (self.subsets.len() - 1) as u32
            }
        }
    }

    fn subset(&self, i: u32) -> &Subset {
        self.subsets[i as usize].as_ref().expect("live subset")
    }

    fn take_subset(&mut self, i: u32) -> Subset {
        self.free.push(i);
        self.subsets[i as usize].take().expect("live subset")
    }

    fn singleton(&self, l: LogId) -> Subset {
        let (v, a, b) = self.locate_home(l);
        let walls = self.walls(v);
        let node = DsNode::build(vec![(l, a, b)], &self.env(&walls));
        Subset { members: vec![l], nodes: HashMap::from([(v, node)]) }
    }

    fn merge_pair(&self, x: Subset, y: Subset) -> Subset {
        let (mut big, small) = if x.nodes.len() >= y.nodes.len() { (x, y) } else { (y, x) };
        for (v, n) in small.nodes {
            let merged = match big.nodes.remove(&v) {
                Some(m) => {
                    let walls = self.walls(v);
                    DsNode::merge(&m, &n, &self.env(&walls))
                }
                None => n,
            };
            big.nodes.insert(v, merged);
        }
        big.members.extend_from_slice(&small.members);
        big
    }
}

impl LocateCc {
    /// Merges equal sizes, largest first, until all sizes are distinct.
    fn normalize(&mut self, list: &mut Vec<u32>, component: bool) {
        loop {
            list.sort_by_key(|&i| std::cmp::Reverse(self.subset(i).members.len()));
            let Some(k) = (1..list.len()).find(|&k| self.subset(list[k]).members.len() == self.subset(list[k - 1]).members.len())
            else {
                return;
            };
            let (i, j) = (list[k - 1], list[k]);
            list.drain(k - 1..=k);
            let (x, y) = (self.take_subset(i), self.take_subset(j));
            let merged = self.merge_pair(x, y);
            let id = self.alloc_subset(merged);
            let members = self.subset(id).members.clone();
            for l in members {
                if component {
                    self.comp_subset[l as usize] = id;
                    self.merge_count[l as usize] += 1;
                    self.stats.merges_max_per_edge = self.stats.merges_max_per_edge.max(self.merge_count[l as usize]);
                } else {
                    self.glob_subset[l as usize] = id;
                }
            }
            if component {
                self.stats.merges += 1;
            }
            list.push(id);
        }
    }

    fn add_key(&mut self, k: &Point) {
        let mut events: Vec<SplitEvent> = Vec::new();
        let fresh = self.backbone.insert(k.clone(), |_, ev| events.push(ev.clone()));
        let mut dirty: Vec<NodeId> = Vec::new();
        for ev in &events {
            self.stats.backbone_splits += 1;
            dirty.extend_from_slice(&ev.removed);
            dirty.push(ev.parent);
        }
        if fresh {
            // a new leaf shifts the child indices at its parent
            let path = self.backbone.path(k);
            if path.len() >= 2 {
                dirty.push(path[path.len() - 2]);
            }
        }
        self.replace(dirty);
    }

    /// Moves every segment stored at `dirty` nodes to its current home and
    /// rebuilds the pieces of its two subsets there. A segment's home holds
    /// it in both subsets, so pieces at dirty nodes consist of moved
    /// segments only.
    fn replace(&mut self, mut dirty: Vec<NodeId>) {
        dirty.sort_unstable();
        dirty.dedup();
        // pieces exist only where some member is stored
        let mut moved: Vec<(NodeId, LogId)> = Vec::new();
        for &v in &dirty {
            moved.extend(self.stored.remove(&v).unwrap_or_default().into_iter().map(|l| (v, l)));
        }
        if moved.is_empty() {
            return;
        }
        moved.sort_unstable_by_key(|&(_, l)| l);
        self.stats.replacements += moved.len() as u64;
        let mut groups: BTreeMap<(u32, NodeId), Vec<(LogId, usize, usize)>> = BTreeMap::new();
        for &(old, l) in &moved {
            let (v, a, b) = self.locate_home(l);
            self.home[l as usize] = v;
            self.stored.entry(v).or_default().push(l);
            for s in [self.comp_subset[l as usize], self.glob_subset[l as usize]] {
                self.subsets[s as usize].as_mut().expect("live subset").nodes.remove(&old);
                groups.entry((s, v)).or_default().push((l, a, b));
            }
        }
        for ((s, v), mut members) in groups {
            let walls = self.walls(v);
            if let Some(old) = self.subsets[s as usize].as_mut().expect("live subset").nodes.remove(&v) {
                members.extend_from_slice(&old.members);
            }
            self.stats.rebuilt += members.len() as u64;
            let node = DsNode::build(members, &self.env(&walls));
            self.subsets[s as usize].as_mut().expect("live subset").nodes.insert(v, node);
        }
    }
}

impl LocateCc {
    /// Registers edge `e`, just inserted into `sub`, with its component.
    pub fn insert_edge_component(&mut self, sub: &Subdivision, e: EdgeId) {
        let seg = sub.segment(e).clone();
        let l = self.segs.len() as LogId;
        self.segs.push(seg.clone());
        self.parts.push(BTreeMap::from([(seg.a.clone(), e)]));
        if self.log_of_edge.len() <= e as usize {
            self.log_of_edge.resize(e as usize + 1, NONE);
        }
        self.log_of_edge[e as usize] = l;
        self.home.push(NodeId::MAX);
        self.comp_subset.push(NONE);
        self.glob_subset.push(NONE);
        self.merge_count.push(0);
        self.stats.edges += 1;
        let g = self.groups.make_set();
        debug_assert_eq!(g, l);
        // registries of the components met at either endpoint
        let mut lists: Vec<u32> = Vec::new();
        for v in [sub.tail(2 * e), sub.head(2 * e)] {
            let Some(f) = sub.rotation(v).into_iter().map(edge_of).find(|&f| f != e) else { continue };
            let r = self.groups.find(self.log_of_edge[f as usize]);
            if let Some(mut old) = self.registry.remove(&r) {
                lists.append(&mut old);
            }
            self.groups.union(r, l);
        }
        if seg.is_vertical() {
            self.verticals.insert(seg.a.clone(), l);
        } else {
            self.add_key(&seg.a);
            self.add_key(&seg.b);
            let (v, _, _) = self.locate_home(l);
            self.home[l as usize] = v;
            self.stored.entry(v).or_default().push(l);
            let one = self.singleton(l);
            let c = self.alloc_subset(one.clone());
            self.comp_subset[l as usize] = c;
            lists.push(c);
            let gl = self.alloc_subset(one);
            self.glob_subset[l as usize] = gl;
            let mut global = std::mem::take(&mut self.global);
            global.push(gl);
            self.normalize(&mut global, false);
            self.global = global;
        }
        self.normalize(&mut lists, true);
        let root = self.groups.find(l);
        self.registry.insert(root, lists);
    }

    /// Records that edge `e` was cut at `p`, its part beyond `p` becoming
    /// edge `tail_part`. The logical segment and its structures stay.
    pub fn split_edge(&mut self, e: EdgeId, p: &Point, tail_part: EdgeId) {
        let l = self.log_of_edge[e as usize];
        if self.log_of_edge.len() <= tail_part as usize {
            self.log_of_edge.resize(tail_part as usize + 1, NONE);
        }
        self.log_of_edge[tail_part as usize] = l;
        self.parts[l as usize].insert(p.clone(), tail_part);
    }

    /// Sub-edge of `l` at `at`, taking the part left of a junction.
    fn part_at(&self, l: LogId, at: &Point) -> EdgeId {
        let parts = &self.parts[l as usize];
        parts.range(..at.clone()).next_back().or_else(|| parts.iter().next()).map(|(_, &e)| e).unwrap()
    }
}

impl LocateCc {
    /// Internal nodes on the backbone path of `q` with the child holding it.
    fn query_path(&self, q: &Point) -> Vec<(NodeId, usize)> {
        let mut out = Vec::new();
        let Some(mut v) = self.backbone.root() else { return out };
        while !self.backbone.node(v).is_leaf() {
            let c = self.backbone.child_index(v, q);
            out.push((v, c));
            v = self.backbone.node(v).children[c];
        }
        out
    }

    fn shoot(&self, list: &[u32], q: &Point, strict: bool) -> Option<LogId> {
        let path = self.query_path(q);
        let mut cands = Vec::new();
        for &s in list {
            let sub = self.subset(s);
            for &(v, c) in &path {
                if let Some(node) = sub.nodes.get(&v) {
                    node.query(&self.segs, q, c, strict, &mut cands);
                }
            }
        }
        cands.into_iter().min_by(|&x, &y| cmp_hits(&self.segs[x as usize], &self.segs[y as usize], q).then(x.cmp(&y)))
    }

    fn registry_of(&self, gamma: ComponentId) -> Option<&Vec<u32>> {
        let l = *self.log_of_edge.get(gamma as usize)?;
        if l == NONE {
            return None;
        }
        self.registry.get(&self.groups.find_const(l))
    }

    /// First edge of component `gamma` hit by the upward ray from `q`,
    /// with the hit point.
    pub fn ray_shoot(&self, gamma: ComponentId, q: &Point) -> Result<Option<(EdgeId, Point)>, LocateCcError> {
        let list = self.registry_of(gamma).ok_or(LocateCcError::DeadComponent(gamma))?;
        Ok(self.shoot(list, q, true).map(|l| {
            let hit = Point { x: q.x.clone(), y: self.segs[l as usize].y_at(&q.x) };
            (self.part_at(l, &hit), hit)
        }))
    }

    /// Edge containing `q` in its relative interior, over all components.
    /// `q` must not be a vertex.
    pub fn edge_through(&self, q: &Point) -> Option<EdgeId> {
        if let Some((_, &l)) = self.verticals.range(..=q.clone()).next_back() {
            if self.segs[l as usize].contains(q) {
                return Some(self.part_at(l, q));
            }
        }
        let l = self.shoot(&self.global, q, false)?;
        (self.segs[l as usize].cmp_point(q) == Ordering::Equal).then(|| self.part_at(l, q))
    }

    /// Subset sizes of the component of `gamma`, largest first.
    pub fn subset_sizes(&self, gamma: ComponentId) -> Vec<usize> {
        let mut v: Vec<usize> =
            self.registry_of(gamma).map(|l| l.iter().map(|&s| self.subset(s).members.len()).collect()).unwrap_or_default();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }

    pub fn stats(&self) -> LocateCcStats {
        let mut st = self.stats;
        st.backbone_nodes = self.backbone.node_count() as u64;
        st.structure_size =
            self.registry.values().flatten().map(|&s| self.subset(s).nodes.values().map(|n| n.size() as u64).sum::<u64>()).sum();
        st
    }

    /// Registry sizes, placement of every segment and block discipline.
    pub fn check_invariants(&self) -> Result<(), String> {
        self.backbone.check_invariants()?;
        for (r, list) in &self.registry {
            let mut sizes: Vec<usize> = list.iter().map(|&s| self.subset(s).members.len()).collect();
            sizes.sort_unstable();
            if sizes.iter().any(|s| !s.is_power_of_two()) || sizes.windows(2).any(|w| w[0] == w[1]) {
                return Err(format!("registry {r} has sizes {sizes:?}"));
            }
        }
        for (name, lists) in
            [("component", self.registry.values().flatten().copied().collect::<Vec<_>>()), ("global", self.global.clone())]
        {
            for s in lists {
                let sub = self.subset(s);
                let mut count = 0;
                for (&v, node) in &sub.nodes {
                    node.audit(&self.segs, self.bound)?;
                    for &(l, a, b) in &node.members {
                        count += 1;
                        if self.home[l as usize] != v || self.locate_home(l) != (v, a, b) {
                            return Err(format!("{name} subset {s}: segment {l} misplaced"));
                        }
                    }
                }
                if count != sub.members.len() {
                    return Err(format!("{name} subset {s}: {count} placed of {}", sub.members.len()));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::rng;
    use crate::oracle::{naive_ray_shoot, validate_insertion};
    use rand::Rng;

    fn add(sub: &mut Subdivision, lc: &mut LocateCc, s: Segment) -> EdgeId {
        let (e, _, _) = sub.insert_edge(&s).unwrap();
        lc.insert_edge_component(sub, e);
        e
    }

    fn square(sub: &mut Subdivision, lc: &mut LocateCc, lo: i64, hi: i64) {
        for s in [
            Segment::from_ints(lo, lo, hi, lo),
            Segment::from_ints(hi, lo, hi, hi),
            Segment::from_ints(lo, hi, hi, hi),
            Segment::from_ints(lo, lo, lo, hi),
        ] {
            add(sub, lc, s);
        }
    }

    #[test]
    fn examples() {
        let mut sub = Subdivision::new();
        let mut lc = LocateCc::default();
        let e = add(&mut sub, &mut lc, Segment::from_ints(0, 0, 10, 0));
        assert_eq!(lc.subset_sizes(e), vec![1]);
        assert_eq!(lc.ray_shoot(e, &Point::new(5, -3)).unwrap(), Some((e, Point::new(5, 0))));
        let mut sub = Subdivision::new();
        let mut lc = LocateCc::default();
        square(&mut sub, &mut lc, 0, 10);
        let g = sub.component(0);
        assert_eq!(lc.ray_shoot(g, &Point::new(5, 5)).unwrap(), Some((2, Point::new(5, 10))));
        assert_eq!(lc.ray_shoot(g, &Point::new(5, 11)).unwrap(), None);
        // vertical sides are never hit and join no subset
        assert_eq!(lc.subset_sizes(g), vec![2]);
        assert_eq!(lc.edge_through(&Point::new(5, 10)), Some(2));
        assert_eq!(lc.edge_through(&Point::new(10, 5)), Some(1));
        assert_eq!(lc.edge_through(&Point::new(5, 5)), None);
        assert!(lc.ray_shoot(99, &Point::new(0, 0)).is_err());
    }

    #[test]
    fn bridging_merges_equal_sizes() {
        let mut sub = Subdivision::new();
        let mut lc = LocateCc::default();
        // component A: 5 edges in a chain, component B: 6 edges in a chain
        for i in 0..5 {
            add(&mut sub, &mut lc, Segment::from_ints(i, 0, i + 1, 0));
        }
        for i in 0..6 {
            add(&mut sub, &mut lc, Segment::from_ints(i, 10, i + 1, 10));
        }
        assert_eq!(lc.subset_sizes(0), vec![4, 1]);
        assert_eq!(lc.subset_sizes(5), vec![4, 2]);
        let e = add(&mut sub, &mut lc, Segment::from_ints(0, 0, 0, 10));
        // the vertical bridge adds no subset: {4,1} + {4,2} -> {8,2,1}
        assert_eq!(lc.subset_sizes(sub.component(e)), vec![8, 2, 1]);
        lc.check_invariants().unwrap();
    }

    /// Random planar insertions on a small grid, with some vertices cut
    /// into existing edges.
    fn run_random(seed: u64, steps: usize, lc: &mut LocateCc) {
        let mut r = rng(seed);
        let mut sub = Subdivision::new();
        let mut segs: Vec<Segment> = Vec::new();
        let g = 24;
        let mut done = 0;
        let mut hits = 0;
        while done < steps {
            if !segs.is_empty() && r.gen_bool(0.1) {
                let e = r.gen_range(0..segs.len()) as EdgeId;
                let s = sub.segment(e).clone();
                let p = Point { x: &(&s.a.x + &s.b.x) / &2.into(), y: &(&s.a.y + &s.b.y) / &2.into() };
                if sub.vertex_at(&p).is_some() {
                    continue;
                }
                sub.insert_vertex(&p, Some(e)).unwrap();
                let e2 = (sub.edge_count() - 1) as EdgeId;
                lc.split_edge(e, &p, e2);
                segs[e as usize] = sub.segment(e).clone();
                segs.push(sub.segment(e2).clone());
            } else {
                let verts: Vec<Point> = sub.vertex_points().cloned().collect();
                let pick = |r: &mut rand_chacha::ChaCha8Rng| {
                    if !verts.is_empty() && r.gen_bool(0.4) {
                        verts[r.gen_range(0..verts.len())].clone()
                    } else {
                        Point::new(r.gen_range(0..g), r.gen_range(0..g))
                    }
                };
                let Ok(s) = Segment::new(pick(&mut r), pick(&mut r)) else { continue };
                if validate_insertion(&segs, &[], &s).is_err() {
                    continue;
                }
                let (e, _, _) = sub.insert_edge(&s).unwrap();
                lc.insert_edge_component(&sub, e);
                segs.push(s);
            }
            done += 1;
            if done % 8 != 0 {
                continue;
            }
            lc.check_invariants().unwrap();
            for _ in 0..40 {
                let q = Point::new(
                    Coord::from_ratio(r.gen_range(-2..2 * g + 2), 2),
                    Coord::from_ratio(r.gen_range(-2..2 * g + 2), 2),
                );
                if sub.vertex_at(&q).is_some() {
                    continue;
                }
                let through = (0..segs.len()).find(|&i| segs[i].contains(&q)).map(|i| i as EdgeId);
                assert_eq!(lc.edge_through(&q), through, "seed {seed} step {done} q={q:?}");
                let gamma = sub.component(r.gen_range(0..segs.len()) as EdgeId);
                let mine: Vec<usize> = (0..segs.len()).filter(|&i| sub.component(i as EdgeId) == gamma).collect();
                let own: Vec<Segment> = mine.iter().map(|&i| segs[i].clone()).collect();
                let want = naive_ray_shoot(&own, &q).map(|k| mine[k] as EdgeId);
                let got = lc.ray_shoot(gamma, &q).unwrap().map(|(e, _)| e);
                assert_eq!(got, want, "seed {seed} step {done} q={q:?}");
                hits += usize::from(got.is_some()) + usize::from(through.is_some());
            }
        }
        assert!(hits > steps, "too few non-empty answers: {hits}");
        assert!(lc.stats().merges_max_per_edge as f64 <= (segs.len() as f64).log2().ceil() + 1.0);
    }

    use crate::geom::Coord;

    #[test]
    fn matches_scan_small_params() {
        for seed in 0..6 {
            run_random(seed, 160, &mut LocateCc::with_params(2, 2, Strategy::PlainBinary));
        }
    }

    #[test]
    fn matches_scan_cascading() {
        for seed in 10..14 {
            run_random(seed, 160, &mut LocateCc::with_params(3, 3, Strategy::Cascading));
        }
    }

    #[test]
    fn matches_scan_default_params() {
        for seed in 20..23 {
            run_random(seed, 200, &mut LocateCc::default());
        }
    }
}
