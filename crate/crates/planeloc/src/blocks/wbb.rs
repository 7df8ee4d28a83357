//! Weight-balanced multiway search tree with keys at the leaves.
//!
//! A node of height `h` holds between `f^h / 2` and `f^h` leaves (the root
//! is exempt from the lower bound). An insertion that overflows a node
//! rebuilds the highest overflowing node on its path as two perfectly
//! balanced siblings, and reports the change through the split hook.

pub type NodeId = u32;

pub const NIL: NodeId = u32::MAX;

#[derive(Debug, Clone)]
pub struct WbbNode<K> {
    pub parent: NodeId,
    pub children: Vec<NodeId>,
    /// Smallest key in the subtree; the stored key for a leaf.
    pub first: K,
    pub height: u32,
    pub weight: u64,
    alive: bool,
}

impl<K> WbbNode<K> {
    pub fn is_leaf(&self) -> bool {
        self.height == 0
    }
}

/// One split: the subtree below `parent` was restructured. `removed` are
/// the discarded internal nodes, `added` the fresh ones (leaves keep ids).
#[derive(Debug, Clone, Default)]
pub struct SplitEvent {
    pub parent: NodeId,
    pub removed: Vec<NodeId>,
    pub added: Vec<NodeId>,
    pub rebuilt_size: u64,
}

#[derive(Debug, Clone)]
pub struct Wbb<K> {
    nodes: Vec<WbbNode<K>>,
    free: Vec<NodeId>,
    root: NodeId,
    f: u64,
    splits: u64,
    len: u64,
}

/// `max(2, round(floor(log2 n0)^(1/2)))`.
pub fn default_fanout(n0: usize) -> usize {
    let lg = (usize::BITS - n0.max(1).leading_zeros() - 1) as f64;
    (lg.sqrt().round() as usize).max(2)
}

impl<K: Ord + Clone> Wbb<K> {
    pub fn new(f: usize) -> Wbb<K> {
        assert!(f >= 2, "fan-out must be at least 2");
        Wbb { nodes: Vec::new(), free: Vec::new(), root: NIL, f: f as u64, splits: 0, len: 0 }
    }

    pub fn fanout(&self) -> usize {
        self.f as usize
    }

    pub fn root(&self) -> Option<NodeId> {
        (self.root != NIL).then_some(self.root)
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn splits(&self) -> u64 {
        self.splits
    }

    pub fn node(&self, v: NodeId) -> &WbbNode<K> {
        &self.nodes[v as usize]
    }

    /// Number of live nodes.
    pub fn node_count(&self) -> usize {
        self.nodes.len() - self.free.len()
    }

    pub fn cap(&self, h: u32) -> u64 {
        self.f.checked_pow(h).unwrap_or(u64::MAX)
    }

    fn alloc(&mut self, n: WbbNode<K>) -> NodeId {
        if let Some(i) = self.free.pop() {
            self.nodes[i as usize] = n;
            i
        } else {
            self.nodes.push(n);
            (self.nodes.len() - 1) as NodeId
        }
    }

    /// Index of the child whose region holds `key`.
    pub fn child_index(&self, v: NodeId, key: &K) -> usize {
        let ch = &self.nodes[v as usize].children;
        let mut lo = 0;
        let mut hi = ch.len();
        // last child with first <= key, or 0
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if &self.nodes[ch[mid] as usize].first <= key {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    /// Root-to-leaf path following regions of `key`.
    pub fn path(&self, key: &K) -> Vec<NodeId> {
        let mut out = Vec::new();
        let mut v = self.root;
        while v != NIL {
            out.push(v);
            let nd = &self.nodes[v as usize];
            if nd.is_leaf() {
                break;
            }
            v = nd.children[self.child_index(v, key)];
        }
        out
    }

    pub fn contains(&self, key: &K) -> bool {
        self.path(key).last().is_some_and(|&l| &self.nodes[l as usize].first == key)
    }

    /// Left boundary key of child `i` of `v` (`None` for the first child).
    pub fn boundary(&self, v: NodeId, i: usize) -> Option<&K> {
        let ch = &self.nodes[v as usize].children;
        (i > 0 && i < ch.len()).then(|| &self.nodes[ch[i] as usize].first)
    }

    /// Inserts `key`; returns false if it was already present.
    pub fn insert(&mut self, key: K, mut hook: impl FnMut(&Wbb<K>, &SplitEvent)) -> bool {
        if self.root == NIL {
            self.root = self.alloc(WbbNode { parent: NIL, children: Vec::new(), first: key, height: 0, weight: 1, alive: true });
            self.len = 1;
            return true;
        }
        if self.nodes[self.root as usize].is_leaf() {
            let old = self.root;
            if self.nodes[old as usize].first == key {
                return false;
            }
            let leaf = self.new_leaf(key);
            let mut kids = vec![old, leaf];
            kids.sort_by(|a, b| self.nodes[*a as usize].first.cmp(&self.nodes[*b as usize].first));
            self.root = self.new_internal(kids, 1);
            self.len = 2;
            return true;
        }
        let mut path = Vec::new();
        let mut v = self.root;
        while self.nodes[v as usize].height > 1 {
            path.push(v);
            v = self.nodes[v as usize].children[self.child_index(v, &key)];
        }
        path.push(v);
        let pos = {
            let ch = &self.nodes[v as usize].children;
            match ch.binary_search_by(|c| self.nodes[*c as usize].first.cmp(&key)) {
                Ok(_) => return false,
                Err(p) => p,
            }
        };
        let leaf = self.new_leaf(key.clone());
        self.nodes[leaf as usize].parent = v;
        self.nodes[v as usize].children.insert(pos, leaf);
        for &u in &path {
            let nd = &mut self.nodes[u as usize];
            nd.weight += 1;
            if key < nd.first {
                nd.first = key.clone();
            }
        }
        self.len += 1;
        if let Some(&over) = path.iter().find(|&&u| {
            let nd = &self.nodes[u as usize];
            nd.weight > self.cap(nd.height)
        }) {
            let ev = self.split(over);
            self.splits += 1;
            hook(self, &ev);
        }
        true
    }

    fn new_leaf(&mut self, key: K) -> NodeId {
        self.alloc(WbbNode { parent: NIL, children: Vec::new(), first: key, height: 0, weight: 1, alive: true })
    }

    fn new_internal(&mut self, kids: Vec<NodeId>, height: u32) -> NodeId {
        let first = self.nodes[kids[0] as usize].first.clone();
        let weight = kids.iter().map(|&k| self.nodes[k as usize].weight).sum();
        let id = self.alloc(WbbNode { parent: NIL, children: kids.clone(), first, height, weight, alive: true });
        for k in kids {
            self.nodes[k as usize].parent = id;
        }
        id
    }

    fn collect(&mut self, v: NodeId, leaves: &mut Vec<NodeId>, removed: &mut Vec<NodeId>) {
        if self.nodes[v as usize].is_leaf() {
            leaves.push(v);
            return;
        }
        let kids = std::mem::take(&mut self.nodes[v as usize].children);
        for k in kids {
            self.collect(k, leaves, removed);
        }
        self.nodes[v as usize].alive = false;
        removed.push(v);
    }

    fn build(&mut self, leaves: &[NodeId], h: u32, added: &mut Vec<NodeId>) -> NodeId {
        if h == 0 {
            debug_assert_eq!(leaves.len(), 1);
            return leaves[0];
        }
        let m = leaves.len() as u64;
        let up = self.cap(h - 1);
        let lo = up.div_ceil(2);
        let mut k = m.div_ceil(up).max(1);
        while k > 1 && m / k < lo {
            k -= 1;
        }
        let k = k.min(m);
        let mut kids = Vec::with_capacity(k as usize);
        let mut start = 0usize;
        for i in 0..k {
            let size = (m / k + u64::from(i < m % k)) as usize;
            let c = self.build(&leaves[start..start + size], h - 1, added);
            kids.push(c);
            start += size;
        }
        let id = self.new_internal(kids, h);
        added.push(id);
        id
    }

    fn split(&mut self, v: NodeId) -> SplitEvent {
        let h = self.nodes[v as usize].height;
        let parent = self.nodes[v as usize].parent;
        let mut leaves = Vec::new();
        let mut removed = Vec::new();
        self.collect(v, &mut leaves, &mut removed);
        for &r in &removed {
            self.free.push(r);
        }
        let mut added = Vec::new();
        let half = leaves.len() / 2;
        let a = self.build(&leaves[..half], h, &mut added);
        let b = self.build(&leaves[half..], h, &mut added);
        let parent = if parent == NIL {
            let r = self.new_internal(vec![a, b], h + 1);
            added.push(r);
            self.root = r;
            r
        } else {
            let ch = &mut self.nodes[parent as usize].children;
            let at = ch.iter().position(|&c| c == v).expect("child link");
            ch.splice(at..at + 1, [a, b]);
            self.nodes[a as usize].parent = parent;
            self.nodes[b as usize].parent = parent;
            parent
        };
        SplitEvent { parent, removed, added, rebuilt_size: leaves.len() as u64 }
    }

    /// All nodes in the subtree of `v`, preorder.
    pub fn subtree(&self, v: NodeId) -> Vec<NodeId> {
        let mut out = Vec::new();
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            out.push(u);
            stack.extend(self.nodes[u as usize].children.iter().rev());
        }
        out
    }

    /// Keys in order.
    pub fn keys(&self) -> Vec<K> {
        match self.root() {
            None => Vec::new(),
            Some(r) => self
                .subtree(r)
                .into_iter()
                .filter(|&u| self.nodes[u as usize].is_leaf())
                .map(|u| self.nodes[u as usize].first.clone())
                .collect(),
        }
    }

    /// Checks the weight bounds, equal leaf depth, links and key order.
    pub fn check_invariants(&self) -> Result<(), String> {
        let Some(r) = self.root() else { return Ok(()) };
        self.check_node(r, true).map(|_| ())
    }

    fn check_node(&self, v: NodeId, is_root: bool) -> Result<u64, String> {
        let nd = &self.nodes[v as usize];
        if !nd.alive {
            return Err(format!("node {v} is dead"));
        }
        let cap = self.cap(nd.height);
        if nd.weight > cap || (!is_root && 2 * nd.weight < cap) {
            return Err(format!("node {v} at height {} has weight {} outside bounds", nd.height, nd.weight));
        }
        if nd.is_leaf() {
            return Ok(1);
        }
        let mut w = 0;
        let mut prev: Option<&K> = None;
        for &c in &nd.children {
            let cn = &self.nodes[c as usize];
            if cn.parent != v || cn.height + 1 != nd.height {
                return Err(format!("child {c} of {v} mislinked"));
            }
            if prev.is_some_and(|p| p >= &cn.first) {
                return Err(format!("children of {v} out of order"));
            }
            prev = Some(&cn.first);
            w += self.check_node(c, false)?;
        }
        if w != nd.weight || self.nodes[nd.children[0] as usize].first != nd.first {
            return Err(format!("cached fields of {v} are stale"));
        }
        Ok(w)
    }
}
