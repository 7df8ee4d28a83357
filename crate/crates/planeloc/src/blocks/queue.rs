//! Concatenable queues as 2-3 trees with parent links.
//!
//! All queues share one node arena. Leaves are stable across split and
//! concat, so a leaf index doubles as an element handle; every internal
//! node caches the minimum payload below it.

pub type QueueId = u32;

const NIL: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ElementHandle {
    idx: u32,
    gen: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QueueError {
    #[error("element handle is stale")]
    StaleHandle,
    #[error("element does not belong to queue {0}")]
    WrongQueue(QueueId),
    #[error("queue {0} is not live")]
    DeadQueue(QueueId),
    #[error("cannot concatenate a queue with itself")]
    SameQueue,
}

#[derive(Debug, Clone)]
struct Node {
    parent: u32,
    kids: [u32; 3],
    n: u8,
    height: u8,
    min: u32,
    size: u32,
    gen: u32,
    qid: QueueId,
    alive: bool,
}

#[derive(Debug, Clone, Default)]
pub struct QueueForest {
    nodes: Vec<Node>,
    free: Vec<u32>,
    roots: Vec<u32>,
    live: Vec<bool>,
}

impl QueueForest {
    pub fn new() -> QueueForest {
        QueueForest::default()
    }

    fn alloc(&mut self, height: u8, val: u32) -> u32 {
        let node = Node { parent: NIL, kids: [NIL; 3], n: 0, height, min: val, size: 1, gen: 0, qid: NIL, alive: true };
        if let Some(i) = self.free.pop() {
            let gen = self.nodes[i as usize].gen.wrapping_add(1);
            self.nodes[i as usize] = Node { gen, ..node };
            i
        } else {
            self.nodes.push(node);
            (self.nodes.len() - 1) as u32
        }
    }

    fn release(&mut self, i: u32) {
        let nd = &mut self.nodes[i as usize];
        nd.alive = false;
        nd.parent = NIL;
        nd.n = 0;
        self.free.push(i);
    }

    fn pull(&mut self, v: u32) {
        let (n, kids) = {
            let nd = &self.nodes[v as usize];
            (nd.n as usize, nd.kids)
        };
        let mut min = u32::MAX;
        let mut size = 0;
        for &k in &kids[..n] {
            let kn = &self.nodes[k as usize];
            min = min.min(kn.min);
            size += kn.size;
        }
        let nd = &mut self.nodes[v as usize];
        nd.min = min;
        nd.size = size;
    }

    fn set_kids(&mut self, v: u32, kids: &[u32]) {
        debug_assert!(!kids.is_empty() && kids.len() <= 3);
        {
            let nd = &mut self.nodes[v as usize];
            nd.n = kids.len() as u8;
            nd.kids = [NIL; 3];
            nd.kids[..kids.len()].copy_from_slice(kids);
        }
        for &k in kids {
            self.nodes[k as usize].parent = v;
        }
        self.pull(v);
    }

    fn new_internal(&mut self, kids: &[u32]) -> u32 {
        let h = self.nodes[kids[0] as usize].height + 1;
        let v = self.alloc(h, 0);
        self.set_kids(v, kids);
        v
    }

    fn refresh_to_root(&mut self, mut v: u32) -> u32 {
        loop {
            self.pull(v);
            let p = self.nodes[v as usize].parent;
            if p == NIL {
                return v;
            }
            v = p;
        }
    }

    /// Adds `extra` as a child of `v` at the front or the back, splitting
    /// upward on overflow. Returns the root.
    fn attach(&mut self, v: u32, extra: u32, front: bool) -> u32 {
        let mut v = v;
        let mut extra = extra;
        loop {
            let nd = &self.nodes[v as usize];
            let mut kids: Vec<u32> = nd.kids[..nd.n as usize].to_vec();
            if front {
                kids.insert(0, extra);
            } else {
                kids.push(extra);
            }
            if kids.len() <= 3 {
                self.set_kids(v, &kids);
                let p = self.nodes[v as usize].parent;
                return if p == NIL { v } else { self.refresh_to_root(p) };
            }
            // four children: keep two here, move two to a new sibling
            let (keep, moved): (Vec<u32>, Vec<u32>) =
                if front { (kids[2..].to_vec(), kids[..2].to_vec()) } else { (kids[..2].to_vec(), kids[2..].to_vec()) };
            self.set_kids(v, &keep);
            let sib = self.new_internal(&moved);
            let p = self.nodes[v as usize].parent;
            if p == NIL {
                let pair = if front { [sib, v] } else { [v, sib] };
                return self.new_internal(&pair);
            }
            // insert sib next to v in p
            let pn = &self.nodes[p as usize];
            let mut pk: Vec<u32> = pn.kids[..pn.n as usize].to_vec();
            let at = pk.iter().position(|&k| k == v).expect("child link");
            if pk.len() < 3 {
                pk.insert(if front { at } else { at + 1 }, sib);
                self.set_kids(p, &pk);
                return self.refresh_to_root(p);
            }
            // parent full: its own overflow is handled by inserting at v's spot
            if front {
                debug_assert_eq!(at, 0);
            } else {
                debug_assert_eq!(at, pk.len() - 1);
            }
            extra = sib;
            v = p;
        }
    }

    fn join(&mut self, a: u32, b: u32) -> u32 {
        if a == NIL {
            return b;
        }
        if b == NIL {
            return a;
        }
        let (ha, hb) = (self.nodes[a as usize].height, self.nodes[b as usize].height);
        if ha == hb {
            return self.new_internal(&[a, b]);
        }
        if ha > hb {
            let mut v = a;
            while self.nodes[v as usize].height > hb + 1 {
                let nd = &self.nodes[v as usize];
                v = nd.kids[nd.n as usize - 1];
            }
            self.attach(v, b, false)
        } else {
            let mut v = b;
            while self.nodes[v as usize].height > ha + 1 {
                v = self.nodes[v as usize].kids[0];
            }
            self.attach(v, a, true)
        }
    }

    fn check(&self, h: ElementHandle) -> Result<(), QueueError> {
        match self.nodes.get(h.idx as usize) {
            Some(nd) if nd.alive && nd.gen == h.gen && nd.height == 0 => Ok(()),
            _ => Err(QueueError::StaleHandle),
        }
    }

    fn check_queue(&self, q: QueueId) -> Result<(), QueueError> {
        if self.live.get(q as usize).copied().unwrap_or(false) {
            Ok(())
        } else {
            Err(QueueError::DeadQueue(q))
        }
    }

    fn root_of(&self, mut v: u32) -> u32 {
        while self.nodes[v as usize].parent != NIL {
            v = self.nodes[v as usize].parent;
        }
        v
    }

    fn install(&mut self, q: QueueId, root: u32) {
        self.roots[q as usize] = root;
        if root != NIL {
            let nd = &mut self.nodes[root as usize];
            nd.parent = NIL;
            nd.qid = q;
        }
    }

    fn fresh_id(&mut self) -> QueueId {
        self.roots.push(NIL);
        self.live.push(true);
        (self.roots.len() - 1) as QueueId
    }

    /// A new empty queue.
    pub fn create(&mut self) -> QueueId {
        self.fresh_id()
    }

    /// A new queue holding `vals`, built bottom-up in linear time.
    pub fn create_from(&mut self, vals: &[u32]) -> (QueueId, Vec<ElementHandle>) {
        let q = self.fresh_id();
        let leaves: Vec<u32> = vals.iter().map(|&v| self.alloc(0, v)).collect();
        let handles = leaves.iter().map(|&i| ElementHandle { idx: i, gen: self.nodes[i as usize].gen }).collect();
        let mut level = leaves;
        while level.len() > 1 {
            let mut next = Vec::with_capacity(level.len() / 2 + 1);
            let mut i = 0;
            while i < level.len() {
                let rest = level.len() - i;
                let take = if rest == 4 || rest == 2 { 2 } else { 3.min(rest) };
                next.push(self.new_internal(&level[i..i + take]));
                i += take;
            }
            level = next;
        }
        let root = level.first().copied().unwrap_or(NIL);
        self.install(q, root);
        (q, handles)
    }

    pub fn is_live(&self, q: QueueId) -> bool {
        self.check_queue(q).is_ok()
    }

    pub fn live_ids(&self) -> impl Iterator<Item = QueueId> + '_ {
        self.live.iter().enumerate().filter(|(_, &l)| l).map(|(i, _)| i as QueueId)
    }

    pub fn len(&self, q: QueueId) -> usize {
        let r = self.roots[q as usize];
        if r == NIL {
            0
        } else {
            self.nodes[r as usize].size as usize
        }
    }

    pub fn is_empty(&self, q: QueueId) -> bool {
        self.roots[q as usize] == NIL
    }

    /// Minimum payload in the queue.
    pub fn min(&self, q: QueueId) -> Option<u32> {
        let r = self.roots[q as usize];
        (r != NIL).then(|| self.nodes[r as usize].min)
    }

    pub fn value(&self, h: ElementHandle) -> Result<u32, QueueError> {
        self.check(h)?;
        Ok(self.nodes[h.idx as usize].min)
    }

    /// The queue currently holding `h`, found by walking to the root.
    pub fn queue_of(&self, h: ElementHandle) -> Result<QueueId, QueueError> {
        self.check(h)?;
        Ok(self.nodes[self.root_of(h.idx) as usize].qid)
    }

    fn owned(&self, q: QueueId, h: ElementHandle) -> Result<(), QueueError> {
        self.check_queue(q)?;
        if self.queue_of(h)? != q {
            return Err(QueueError::WrongQueue(q));
        }
        Ok(())
    }

    pub fn push_back(&mut self, q: QueueId, val: u32) -> Result<ElementHandle, QueueError> {
        self.check_queue(q)?;
        let leaf = self.alloc(0, val);
        let r = self.join(self.roots[q as usize], leaf);
        self.install(q, r);
        Ok(ElementHandle { idx: leaf, gen: self.nodes[leaf as usize].gen })
    }

    /// Splits `v`'s tree into the part up to and including `leaf` and the
    /// rest, freeing every ancestor of `leaf`.
    fn split_raw(&mut self, leaf: u32) -> (u32, u32) {
        let mut left = leaf;
        let mut right = NIL;
        let mut child = leaf;
        let mut v = self.nodes[leaf as usize].parent;
        self.nodes[leaf as usize].parent = NIL;
        while v != NIL {
            let nd = self.nodes[v as usize].clone();
            let kids = &nd.kids[..nd.n as usize];
            let at = kids.iter().position(|&k| k == child).expect("child link");
            for &k in kids {
                self.nodes[k as usize].parent = NIL;
            }
            for &k in kids[..at].iter().rev() {
                left = self.join(k, left);
            }
            for &k in &kids[at + 1..] {
                right = self.join(right, k);
            }
            let up = nd.parent;
            self.release(v);
            child = v;
            v = up;
        }
        (left, right)
    }

    /// Prefix through `at` keeps `q`; the suffix gets a fresh id.
    pub fn split(&mut self, q: QueueId, at: ElementHandle) -> Result<(QueueId, QueueId), QueueError> {
        self.owned(q, at)?;
        let (l, r) = self.split_raw(at.idx);
        let q2 = self.fresh_id();
        self.install(q, l);
        self.install(q2, r);
        Ok((q, q2))
    }

    /// Prefix strictly before `at` keeps `q`; the suffix from `at` gets a
    /// fresh id.
    pub fn split_before(&mut self, q: QueueId, at: ElementHandle) -> Result<(QueueId, QueueId), QueueError> {
        self.owned(q, at)?;
        let (l, r) = self.split_raw(at.idx);
        // move `at` from the end of l to the front of r
        let (l2, lone) = match self.prev_leaf(at.idx) {
            Some(p) => {
                let (a, b) = self.split_raw(p);
                (a, b)
            }
            None => (NIL, l),
        };
        debug_assert_eq!(lone, at.idx);
        let r2 = self.join(lone, r);
        let q2 = self.fresh_id();
        self.install(q, l2);
        self.install(q2, r2);
        Ok((q, q2))
    }

    fn prev_leaf(&self, mut v: u32) -> Option<u32> {
        loop {
            let p = self.nodes[v as usize].parent;
            if p == NIL {
                return None;
            }
            let pn = &self.nodes[p as usize];
            let at = pn.kids[..pn.n as usize].iter().position(|&k| k == v).unwrap();
            if at > 0 {
                let mut w = pn.kids[at - 1];
                while self.nodes[w as usize].height > 0 {
                    let nd = &self.nodes[w as usize];
                    w = nd.kids[nd.n as usize - 1];
                }
                return Some(w);
            }
            v = p;
        }
    }

    /// `q1` followed by `q2`; the result keeps `q1`'s id and `q2` retires.
    pub fn concat(&mut self, q1: QueueId, q2: QueueId) -> Result<QueueId, QueueError> {
        self.check_queue(q1)?;
        self.check_queue(q2)?;
        if q1 == q2 {
            return Err(QueueError::SameQueue);
        }
        let r = self.join(self.roots[q1 as usize], self.roots[q2 as usize]);
        self.roots[q2 as usize] = NIL;
        self.live[q2 as usize] = false;
        self.install(q1, r);
        Ok(q1)
    }

    /// Moves the contents of `from` under the id `to` (which must be empty)
    /// and retires `from`.
    pub fn transfer(&mut self, from: QueueId, to: QueueId) -> Result<(), QueueError> {
        self.check_queue(from)?;
        self.check_queue(to)?;
        assert!(self.roots[to as usize] == NIL, "transfer target must be empty");
        let r = self.roots[from as usize];
        self.roots[from as usize] = NIL;
        self.live[from as usize] = false;
        self.install(to, r);
        Ok(())
    }

    /// Exchanges the contents of two live queues.
    pub fn swap_contents(&mut self, a: QueueId, b: QueueId) -> Result<(), QueueError> {
        self.check_queue(a)?;
        self.check_queue(b)?;
        let (ra, rb) = (self.roots[a as usize], self.roots[b as usize]);
        self.install(a, rb);
        self.install(b, ra);
        Ok(())
    }

    /// Retires an empty queue.
    pub fn retire(&mut self, q: QueueId) -> Result<(), QueueError> {
        self.check_queue(q)?;
        assert!(self.roots[q as usize] == NIL, "only empty queues retire");
        self.live[q as usize] = false;
        Ok(())
    }

    pub fn insert_after(&mut self, q: QueueId, at: ElementHandle, val: u32) -> Result<ElementHandle, QueueError> {
        let (q, rest) = self.split(q, at)?;
        let h = self.push_back(q, val)?;
        self.concat(q, rest)?;
        Ok(h)
    }

    pub fn insert_before(&mut self, q: QueueId, at: ElementHandle, val: u32) -> Result<ElementHandle, QueueError> {
        let (q, rest) = self.split_before(q, at)?;
        let h = self.push_back(q, val)?;
        self.concat(q, rest)?;
        Ok(h)
    }

    /// Removes `at`; its handle becomes stale.
    pub fn delete(&mut self, q: QueueId, at: ElementHandle) -> Result<(), QueueError> {
        let (q, rest) = self.split_before(q, at)?;
        let (mid, tail) = self.split(rest, at)?;
        let leaf = self.roots[mid as usize];
        debug_assert_eq!(leaf, at.idx);
        self.roots[mid as usize] = NIL;
        self.release(leaf);
        self.retire(mid)?;
        self.concat(q, tail)?;
        Ok(())
    }

    /// Rotates the cyclic sequence so that `at` is last. Keeps `q`.
    pub fn rotate_to_end(&mut self, q: QueueId, at: ElementHandle) -> Result<(), QueueError> {
        let (q, rest) = self.split(q, at)?;
        let tmp = self.create();
        self.transfer(q, tmp)?;
        self.live[q as usize] = true;
        self.transfer(rest, q)?;
        self.concat(q, tmp)?;
        Ok(())
    }

    pub fn handles(&self, q: QueueId) -> Vec<ElementHandle> {
        let mut out = Vec::new();
        let r = self.roots[q as usize];
        if r != NIL {
            self.collect(r, &mut out);
        }
        out
    }

    fn collect(&self, v: u32, out: &mut Vec<ElementHandle>) {
        let nd = &self.nodes[v as usize];
        if nd.height == 0 {
            out.push(ElementHandle { idx: v, gen: nd.gen });
            return;
        }
        for &k in &nd.kids[..nd.n as usize] {
            self.collect(k, out);
        }
    }

    pub fn to_vec(&self, q: QueueId) -> Vec<u32> {
        self.handles(q).into_iter().map(|h| self.nodes[h.idx as usize].min).collect()
    }

    pub fn first(&self, q: QueueId) -> Option<ElementHandle> {
        let mut v = self.roots[q as usize];
        if v == NIL {
            return None;
        }
        while self.nodes[v as usize].height > 0 {
            v = self.nodes[v as usize].kids[0];
        }
        Some(ElementHandle { idx: v, gen: self.nodes[v as usize].gen })
    }

    /// Total leaves plus internal nodes in use.
    pub fn arena_nodes(&self) -> usize {
        self.nodes.len() - self.free.len()
    }

    /// Checks 2-3 shape, equal leaf depth, parent links and cached fields.
    pub fn check_invariants(&self, q: QueueId) -> Result<(), String> {
        let r = self.roots[q as usize];
        if r == NIL {
            return Ok(());
        }
        if self.nodes[r as usize].parent != NIL || self.nodes[r as usize].qid != q {
            return Err(format!("root of queue {q} is mislinked"));
        }
        self.check_node(r).map(|_| ())
    }

    fn check_node(&self, v: u32) -> Result<(u32, u32), String> {
        let nd = &self.nodes[v as usize];
        if nd.height == 0 {
            return Ok((nd.min, 1));
        }
        let n = nd.n as usize;
        if !(2..=3).contains(&n) {
            return Err(format!("node {v} has {n} children"));
        }
        let (mut mn, mut sz) = (u32::MAX, 0);
        for &k in &nd.kids[..n] {
            let kn = &self.nodes[k as usize];
            if kn.parent != v || kn.height + 1 != nd.height {
                return Err(format!("child {k} of {v} is mislinked"));
            }
            let (m, s) = self.check_node(k)?;
            mn = mn.min(m);
            sz += s;
        }
        if mn != nd.min || sz != nd.size {
            return Err(format!("cached fields of {v} are stale"));
        }
        Ok((mn, sz))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_examples() {
        let mut f = QueueForest::new();
        let (q, h) = f.create_from(&[10, 11, 12, 13]);
        let (a, b) = f.split(q, h[1]).unwrap();
        assert_eq!(a, q);
        assert_eq!(f.to_vec(a), vec![10, 11]);
        assert_eq!(f.to_vec(b), vec![12, 13]);

        let (q, h) = f.create_from(&[1]);
        let (a, b) = f.split(q, h[0]).unwrap();
        assert_eq!((f.to_vec(a), f.to_vec(b)), (vec![1], vec![]));

        let (q, h) = f.create_from(&[1, 2, 3]);
        let (a, b) = f.split(q, h[2]).unwrap();
        assert_eq!((f.to_vec(a), f.to_vec(b)), (vec![1, 2, 3], vec![]));
    }

    #[test]
    fn concat_examples() {
        let mut f = QueueForest::new();
        let (a, _) = f.create_from(&[1]);
        let (b, _) = f.create_from(&[2]);
        assert_eq!(f.concat(a, b).unwrap(), a);
        assert_eq!(f.to_vec(a), vec![1, 2]);
        assert!(!f.is_live(b));
        let e = f.create();
        let (c, _) = f.create_from(&[2, 3]);
        f.concat(e, c).unwrap();
        assert_eq!(f.to_vec(e), vec![2, 3]);
        let e2 = f.create();
        f.concat(e, e2).unwrap();
        assert_eq!(f.to_vec(e), vec![2, 3]);
    }

    #[test]
    fn stale_handles_are_rejected() {
        let mut f = QueueForest::new();
        let (q, h) = f.create_from(&[1, 2, 3]);
        f.delete(q, h[1]).unwrap();
        assert_eq!(f.to_vec(q), vec![1, 3]);
        assert_eq!(f.split(q, h[1]), Err(QueueError::StaleHandle));
        let (q2, _) = f.create_from(&[9]);
        assert_eq!(f.split(q2, h[0]), Err(QueueError::WrongQueue(q2)));
    }

    #[test]
    fn rotation_and_minimum() {
        let mut f = QueueForest::new();
        let (q, h) = f.create_from(&[5, 3, 8, 1, 7]);
        f.rotate_to_end(q, h[2]).unwrap();
        assert_eq!(f.to_vec(q), vec![1, 7, 5, 3, 8]);
        assert_eq!(f.min(q), Some(1));
        assert_eq!(f.queue_of(h[4]).unwrap(), q);
        f.check_invariants(q).unwrap();
    }
}
