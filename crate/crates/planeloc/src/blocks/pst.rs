//! Priority search tree over items sorted along a vertical line.
//!
//! Items sit in a balanced tree in their order along the line; each node
//! also keys the largest priority in its subtree. An item is active for a
//! query when its priority reaches the query threshold (for segments
//! anchored on the line: when the segment spans the query x).

use std::cmp::Ordering;

use crate::geom::{ray_hit, Coord, Point, Segment};

const NIL: u32 = u32::MAX;

#[derive(Debug, Clone)]
struct PNode<P> {
    item: u32,
    left: u32,
    right: u32,
    key: P,
}

#[derive(Debug, Clone)]
pub struct Pst<T, P> {
    items: Vec<T>,
    prio: Vec<P>,
    nodes: Vec<PNode<P>>,
    root: u32,
}

impl<T, P: Ord + Clone> Pst<T, P> {
    /// Builds in linear time from items already in line order.
    pub fn build_sorted(items: Vec<T>, prio: impl Fn(&T) -> P) -> Pst<T, P> {
        let pr: Vec<P> = items.iter().map(prio).collect();
        let mut t = Pst { items, prio: pr, nodes: Vec::new(), root: NIL };
        t.root = t.build(0, t.items.len());
        t
    }

    fn build(&mut self, lo: usize, hi: usize) -> u32 {
        if lo >= hi {
            return NIL;
        }
        let mid = (lo + hi) / 2;
        let l = self.build(lo, mid);
        let r = self.build(mid + 1, hi);
        let mut key = self.prio[mid].clone();
        for c in [l, r] {
            if c != NIL && self.nodes[c as usize].key > key {
                key = self.nodes[c as usize].key.clone();
            }
        }
        self.nodes.push(PNode { item: mid as u32, left: l, right: r, key });
        (self.nodes.len() - 1) as u32
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn items(&self) -> &[T] {
        &self.items
    }

    pub fn item(&self, i: usize) -> &T {
        &self.items[i]
    }

    pub fn root_key(&self) -> Option<&P> {
        (self.root != NIL).then(|| &self.nodes[self.root as usize].key)
    }

    /// First item in line order that is active (`prio >= thr`) and
    /// satisfies `above`, which must be monotone over active items.
    pub fn lowest(&self, thr: &P, above: &impl Fn(&T) -> bool) -> Option<usize> {
        self.lowest_in(self.root, thr, above)
    }

    fn lowest_in(&self, v: u32, thr: &P, above: &impl Fn(&T) -> bool) -> Option<usize> {
        if v == NIL {
            return None;
        }
        let n = &self.nodes[v as usize];
        if &n.key < thr {
            return None;
        }
        let i = n.item as usize;
        if &self.prio[i] >= thr {
            if above(&self.items[i]) {
                return self.lowest_in(n.left, thr, above).or(Some(i));
            }
            return self.lowest_in(n.right, thr, above);
        }
        self.lowest_in(n.left, thr, above).or_else(|| self.lowest_in(n.right, thr, above))
    }

    /// Last item in line order that is active and fails `above`.
    pub fn highest_below(&self, thr: &P, above: &impl Fn(&T) -> bool) -> Option<usize> {
        self.highest_in(self.root, thr, above)
    }

    fn highest_in(&self, v: u32, thr: &P, above: &impl Fn(&T) -> bool) -> Option<usize> {
        if v == NIL {
            return None;
        }
        let n = &self.nodes[v as usize];
        if &n.key < thr {
            return None;
        }
        let i = n.item as usize;
        if &self.prio[i] >= thr {
            if !above(&self.items[i]) {
                return self.highest_in(n.right, thr, above).or(Some(i));
            }
            return self.highest_in(n.left, thr, above);
        }
        self.highest_in(n.right, thr, above).or_else(|| self.highest_in(n.left, thr, above))
    }

    /// Every node key dominates its children's keys and its own item.
    pub fn check_heap(&self) -> bool {
        self.nodes.iter().all(|n| {
            self.prio[n.item as usize] <= n.key
                && [n.left, n.right].iter().all(|&c| c == NIL || self.nodes[c as usize].key <= n.key)
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PstError {
    #[error("query point lies strictly left of the anchor line")]
    LeftOfLine,
    #[error("segments are not sorted along the anchor line")]
    Unsorted,
    #[error("segment does not start on the anchor line")]
    OffLine,
}

/// Segments whose left endpoints lie on the line `x = line_x`.
#[derive(Debug, Clone)]
pub struct PrioritySearchTree {
    line_x: Coord,
    tree: Pst<Segment, Point>,
}

/// Order of two segments just right of their common line.
fn line_order(s: &Segment, t: &Segment) -> Ordering {
    s.a.y.cmp(&t.a.y).then_with(|| crate::geom::cmp_slope(s, t))
}

pub fn pst_build_sorted(line_x: Coord, segs: Vec<Segment>) -> Result<PrioritySearchTree, PstError> {
    if segs.iter().any(|s| s.a.x != line_x || s.is_vertical()) {
        return Err(PstError::OffLine);
    }
    if cfg!(debug_assertions) && segs.windows(2).any(|w| line_order(&w[0], &w[1]) == Ordering::Greater) {
        return Err(PstError::Unsorted);
    }
    Ok(PrioritySearchTree { line_x, tree: Pst::build_sorted(segs, |s| s.b.clone()) })
}

pub fn pst_ray_shoot(t: &PrioritySearchTree, p: &Point) -> Result<Option<Segment>, PstError> {
    if p.x < t.line_x {
        return Err(PstError::LeftOfLine);
    }
    let found = t.tree.lowest(p, &|s: &Segment| ray_hit(s, p).is_some() || s.cmp_point(p) == Ordering::Less);
    // on the line itself no segment spans the query strictly below it
    Ok(found.map(|i| t.tree.item(i)).filter(|s| ray_hit(s, p).is_some()).cloned())
}

impl PrioritySearchTree {
    pub fn root_key(&self) -> Option<&Coord> {
        self.tree.root_key().map(|p| &p.x)
    }

    pub fn len(&self) -> usize {
        self.tree.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tree.is_empty()
    }

    pub fn check_heap(&self) -> bool {
        self.tree.check_heap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example() -> PrioritySearchTree {
        let s1 = Segment::from_ints(0, 5, 10, 5);
        let s2 = Segment::from_ints(0, 2, 4, 2);
        pst_build_sorted(0.into(), vec![s2, s1]).unwrap()
    }

    #[test]
    fn ray_shoot_examples() {
        let t = example();
        let p = |x, y| Point::new(x, y);
        assert_eq!(pst_ray_shoot(&t, &p(6, 0)).unwrap(), Some(Segment::from_ints(0, 5, 10, 5)));
        assert_eq!(pst_ray_shoot(&t, &p(2, 0)).unwrap(), Some(Segment::from_ints(0, 2, 4, 2)));
        assert_eq!(pst_ray_shoot(&t, &p(2, 6)).unwrap(), None);
        assert_eq!(pst_ray_shoot(&t, &p(-1, 0)), Err(PstError::LeftOfLine));
    }

    #[test]
    fn build_examples() {
        let e = pst_build_sorted(0.into(), vec![]).unwrap();
        assert!(e.is_empty() && e.root_key().is_none());
        let one = pst_build_sorted(0.into(), vec![Segment::from_ints(0, 1, 3, 1)]).unwrap();
        assert_eq!(one.len(), 1);
        let t = example();
        assert_eq!(t.root_key(), Some(&Coord::from_int(10)));
        assert!(t.check_heap());
        let bad = pst_build_sorted(0.into(), vec![Segment::from_ints(0, 5, 10, 5), Segment::from_ints(0, 2, 4, 2)]);
        if cfg!(debug_assertions) {
            assert_eq!(bad.unwrap_err(), PstError::Unsorted);
        }
    }
}
