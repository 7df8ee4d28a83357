//! Dynamic segment tree over an ordered key set that grows over time.
//!
//! Leaf `k` covers the half-open range `(prev(k), k]`; a sentinel leaf
//! closes the range at `+∞`. Intervals `(b, t]` are stored at their
//! canonical nodes. Adding a key turns its successor leaf into a two-leaf
//! node in place, so stored intervals stay valid; subtrees that lose
//! balance are rebuilt and their intervals re-placed.

use std::cmp::Ordering;

const NIL: u32 = u32::MAX;
const ALPHA_NUM: u32 = 3;
const ALPHA_DEN: u32 = 4;

/// Total order on keys, possibly depending on geometric context.
pub trait SegCtx<K> {
    fn cmp(&self, a: &K, b: &K) -> Ordering;
}

/// Per-node summary of the intervals stored at that node.
pub trait Payload<C>: Default {
    type Item: Clone;
    fn add(&mut self, item: &Self::Item, ctx: &C);
}

#[derive(Debug, Clone)]
struct SNode<K, A, P> {
    left: u32,
    right: u32,
    /// Leaf key (`None` for the sentinel), or the last key of the left
    /// subtree for internal nodes.
    key: Option<K>,
    leaf: bool,
    size: u32,
    aux: Option<A>,
    payload: P,
    ids: Vec<u32>,
}

#[derive(Debug, Clone)]
pub struct DynSeg<K, A, P: Payload<C>, C> {
    nodes: Vec<SNode<K, A, P>>,
    free: Vec<u32>,
    root: u32,
    ctx: C,
    intervals: Vec<(Option<K>, K, P::Item)>,
    slots: u64,
    rebuilds: u64,
}

/// Read-only view of one node.
pub struct NodeView<'a, K, A, P> {
    pub id: u32,
    pub key: Option<&'a K>,
    pub is_leaf: bool,
    pub aux_min: Option<&'a A>,
    pub payload: &'a P,
}

impl<K: Clone, A: Clone + Ord, P: Payload<C>, C: SegCtx<K>> DynSeg<K, A, P, C> {
    pub fn new(ctx: C) -> Self {
        let mut t = DynSeg { nodes: Vec::new(), free: Vec::new(), root: NIL, ctx, intervals: Vec::new(), slots: 0, rebuilds: 0 };
        t.root = t.leaf(None, None);
        t
    }

    pub fn ctx(&self) -> &C {
        &self.ctx
    }

    pub fn root(&self) -> u32 {
        self.root
    }

    /// Number of real keys.
    pub fn len(&self) -> usize {
        self.nodes[self.root as usize].size as usize - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn interval_count(&self) -> usize {
        self.intervals.len()
    }

    /// Interval copies stored across nodes.
    pub fn slots(&self) -> u64 {
        self.slots
    }

    pub fn rebuilds(&self) -> u64 {
        self.rebuilds
    }

    fn leaf(&mut self, key: Option<K>, aux: Option<A>) -> u32 {
        let n = SNode { left: NIL, right: NIL, key, leaf: true, size: 1, aux, payload: P::default(), ids: Vec::new() };
        if let Some(i) = self.free.pop() {
            self.nodes[i as usize] = n;
            i
        } else {
            self.nodes.push(n);
            (self.nodes.len() - 1) as u32
        }
    }

    pub fn view(&self, id: u32) -> NodeView<'_, K, A, P> {
        let n = &self.nodes[id as usize];
        NodeView { id, key: n.key.as_ref(), is_leaf: n.leaf, aux_min: n.aux.as_ref(), payload: &n.payload }
    }

    pub fn payload_mut(&mut self, id: u32) -> &mut P {
        &mut self.nodes[id as usize].payload
    }

    pub fn children(&self, id: u32) -> Option<(u32, u32)> {
        let n = &self.nodes[id as usize];
        (!n.leaf).then_some((n.left, n.right))
    }

    /// `k <= key`, with `None` as `+∞`.
    fn le(&self, k: &K, key: &Option<K>) -> bool {
        match key {
            None => true,
            Some(s) => self.ctx.cmp(k, s) != Ordering::Greater,
        }
    }

    /// Nodes from the root to the leaf whose range holds `k`.
    pub fn path(&self, k: &K) -> Vec<u32> {
        let mut out = Vec::new();
        let mut v = self.root;
        loop {
            out.push(v);
            let n = &self.nodes[v as usize];
            if n.leaf {
                return out;
            }
            v = if self.le(k, &n.key) { n.left } else { n.right };
        }
    }

    /// True if `k` is a key.
    pub fn contains(&self, k: &K) -> bool {
        self.find(k).is_some()
    }

    /// The stored key equal to `k` under the context order.
    pub fn find(&self, k: &K) -> Option<&K> {
        let leaf = *self.path(k).last().unwrap();
        self.nodes[leaf as usize].key.as_ref().filter(|s| self.ctx.cmp(k, s) == Ordering::Equal)
    }

    /// Lowers the auxiliary value of key `k` to `aux` if that is smaller.
    pub fn lower_aux(&mut self, k: &K, aux: A) {
        let path = self.path(k);
        let leaf = *path.last().unwrap();
        let n = &mut self.nodes[leaf as usize];
        if n.aux.as_ref().is_some_and(|a| a <= &aux) {
            return;
        }
        n.aux = Some(aux);
        for &u in path.iter().rev().skip(1) {
            self.pull(u);
        }
    }

    /// Context access for growing side tables; must not reorder keys.
    pub fn ctx_mut(&mut self) -> &mut C {
        &mut self.ctx
    }

    fn pull(&mut self, v: u32) {
        let (l, r) = (self.nodes[v as usize].left, self.nodes[v as usize].right);
        let size = self.nodes[l as usize].size + self.nodes[r as usize].size;
        let aux = match (&self.nodes[l as usize].aux, &self.nodes[r as usize].aux) {
            (Some(a), Some(b)) => Some(a.min(b).clone()),
            (Some(a), None) => Some(a.clone()),
            (None, Some(b)) => Some(b.clone()),
            (None, None) => None,
        };
        let n = &mut self.nodes[v as usize];
        n.size = size;
        n.aux = aux;
    }

    /// Adds a key with its auxiliary value. Returns false if present.
    pub fn insert_key(&mut self, k: K, aux: A) -> bool {
        let mut path = Vec::new();
        let mut bounds: Vec<(Option<K>, Option<K>)> = Vec::new();
        let (mut lo, mut hi): (Option<K>, Option<K>) = (None, None);
        let mut v = self.root;
        loop {
            path.push(v);
            bounds.push((lo.clone(), hi.clone()));
            let n = &self.nodes[v as usize];
            if n.leaf {
                break;
            }
            if self.le(&k, &n.key) {
                hi = n.key.clone();
                v = n.left;
            } else {
                lo = n.key.clone();
                v = n.right;
            }
        }
        if let Some(s) = &self.nodes[v as usize].key {
            if self.ctx.cmp(&k, s) == Ordering::Equal {
                return false;
            }
        }
        // v becomes internal over [new leaf k, old leaf]
        let (old_key, old_aux) = {
            let n = &self.nodes[v as usize];
            (n.key.clone(), n.aux.clone())
        };
        let a = self.leaf(Some(k.clone()), Some(aux));
        let b = self.leaf(old_key, old_aux);
        {
            let n = &mut self.nodes[v as usize];
            n.leaf = false;
            n.left = a;
            n.right = b;
            n.key = Some(k);
        }
        for &u in path.iter().rev() {
            self.pull(u);
        }
        // rebuild the highest unbalanced node on the path
        for (i, &u) in path.iter().enumerate() {
            let n = &self.nodes[u as usize];
            if n.leaf || n.size < 8 {
                continue;
            }
            let big = self.nodes[n.left as usize].size.max(self.nodes[n.right as usize].size);
            if big * ALPHA_DEN > n.size * ALPHA_NUM {
                let (lo, hi) = bounds[i].clone();
                self.rebuild(u, lo, hi);
                break;
            }
        }
        true
    }

    fn rebuild(&mut self, v: u32, lo: Option<K>, hi: Option<K>) {
        self.rebuilds += 1;
        let mut leaves = Vec::new();
        let mut ids = Vec::new();
        self.drain(v, &mut leaves, &mut ids, true);
        ids.sort_unstable();
        ids.dedup();
        let built = self.build(&leaves);
        // move the built root into slot v
        let moved = std::mem::replace(
            &mut self.nodes[built as usize],
            SNode { left: NIL, right: NIL, key: None, leaf: true, size: 0, aux: None, payload: P::default(), ids: Vec::new() },
        );
        self.nodes[v as usize] = moved;
        self.free.push(built);
        for id in ids {
            let (b, t, _) = self.intervals[id as usize].clone();
            self.place(v, &lo, &hi, &b, &t, id);
        }
    }

    fn drain(&mut self, v: u32, leaves: &mut Vec<(Option<K>, Option<A>)>, ids: &mut Vec<u32>, keep: bool) {
        let n = &mut self.nodes[v as usize];
        self.slots -= n.ids.len() as u64;
        ids.append(&mut n.ids);
        if n.leaf {
            leaves.push((n.key.take(), n.aux.take()));
        } else {
            let (l, r) = (n.left, n.right);
            self.drain(l, leaves, ids, false);
            self.drain(r, leaves, ids, false);
        }
        if !keep {
            self.free.push(v);
        }
    }

    fn build(&mut self, leaves: &[(Option<K>, Option<A>)]) -> u32 {
        if leaves.len() == 1 {
            return self.leaf(leaves[0].0.clone(), leaves[0].1.clone());
        }
        let mid = leaves.len() / 2;
        let l = self.build(&leaves[..mid]);
        let r = self.build(&leaves[mid..]);
        let v = self.leaf(leaves[mid - 1].0.clone(), None);
        let n = &mut self.nodes[v as usize];
        n.leaf = false;
        n.left = l;
        n.right = r;
        self.pull(v);
        v
    }

    /// `a <= b` for optional lower bounds (`None` is `-∞`).
    fn lo_le(&self, a: &Option<K>, b: &Option<K>) -> bool {
        match (a, b) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(x), Some(y)) => self.ctx.cmp(x, y) != Ordering::Greater,
        }
    }

    fn place(&mut self, v: u32, lo: &Option<K>, hi: &Option<K>, b: &Option<K>, t: &K, id: u32) {
        // disjoint: t <= lo or b >= hi
        if let Some(l) = lo {
            if self.ctx.cmp(t, l) != Ordering::Greater {
                return;
            }
        }
        if let (Some(bb), Some(h)) = (b, hi) {
            if self.ctx.cmp(bb, h) != Ordering::Less {
                return;
            }
        }
        let covers = self.lo_le(b, lo) && hi.as_ref().is_some_and(|h| self.ctx.cmp(h, t) != Ordering::Greater);
        if covers {
            let item = self.intervals[id as usize].2.clone();
            let n = &mut self.nodes[v as usize];
            n.ids.push(id);
            n.payload.add(&item, &self.ctx);
            self.slots += 1;
            return;
        }
        let n = &self.nodes[v as usize];
        if n.leaf {
            return;
        }
        let (l, r, sep) = (n.left, n.right, n.key.clone());
        self.place(l, lo, &sep, b, t, id);
        self.place(r, &sep, hi, b, t, id);
    }

    /// Stores `item` on the interval `(b, t]`; `b = None` means `-∞`.
    /// Both bounds should already be keys.
    pub fn insert_interval(&mut self, b: Option<K>, t: K, item: P::Item) -> u32 {
        let id = self.intervals.len() as u32;
        self.intervals.push((b.clone(), t.clone(), item));
        let root = self.root;
        self.place(root, &None, &None, &b, &t, id);
        id
    }

    /// Keys in order with their auxiliary values.
    pub fn keys(&self) -> Vec<(K, A)> {
        let mut out = Vec::new();
        let mut stack = vec![self.root];
        while let Some(v) = stack.pop() {
            let n = &self.nodes[v as usize];
            if n.leaf {
                if let (Some(k), Some(a)) = (&n.key, &n.aux) {
                    out.push((k.clone(), a.clone()));
                }
            } else {
                stack.push(n.right);
                stack.push(n.left);
            }
        }
        out
    }

    /// Depth of the deepest leaf.
    pub fn height(&self) -> usize {
        fn go<K, A, P>(nodes: &[SNode<K, A, P>], v: u32) -> usize {
            let n = &nodes[v as usize];
            if n.leaf {
                0
            } else {
                1 + go(nodes, n.left).max(go(nodes, n.right))
            }
        }
        go(&self.nodes, self.root)
    }

    /// Every payload in the tree, for invariant audits.
    pub fn payloads(&self) -> Vec<&P> {
        let mut out = Vec::new();
        let mut stack = vec![self.root];
        while let Some(v) = stack.pop() {
            let n = &self.nodes[v as usize];
            out.push(&n.payload);
            if !n.leaf {
                stack.push(n.left);
                stack.push(n.right);
            }
        }
        out
    }
}
