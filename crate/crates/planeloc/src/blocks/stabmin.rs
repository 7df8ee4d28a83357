//! Stabbing-min over closed y-intervals with tombstone deletion.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use super::dynseg::{DynSeg, Payload, SegCtx};
use crate::geom::Coord;

/// `(y, 0)` is the lower end of a closed interval, `(y, 1)` the upper end.
type EndKey = (Coord, u8);

#[derive(Debug, Clone, Copy, Default)]
pub struct Lex;

impl SegCtx<EndKey> for Lex {
    fn cmp(&self, a: &EndKey, b: &EndKey) -> Ordering {
        a.cmp(b)
    }
}

#[derive(Debug, Clone)]
pub struct Heap<T: Ord>(BinaryHeap<Reverse<(T, u32)>>);

impl<T: Ord> Default for Heap<T> {
    fn default() -> Self {
        Heap(BinaryHeap::new())
    }
}

impl<T: Ord + Clone> Payload<Lex> for Heap<T> {
    type Item = (T, u32);
    fn add(&mut self, item: &(T, u32), _: &Lex) {
        self.0.push(Reverse(item.clone()));
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: Coord,
    pub hi: Coord,
}

#[derive(Debug, Clone)]
pub struct StabbingMinSet<T: Ord + Clone> {
    tree: DynSeg<EndKey, (), Heap<T>, Lex>,
    items: Vec<(Interval, T)>,
    dead: Vec<bool>,
}

impl<T: Ord + Clone> Default for StabbingMinSet<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Ord + Clone> StabbingMinSet<T> {
    pub fn new() -> Self {
        StabbingMinSet { tree: DynSeg::new(Lex), items: Vec::new(), dead: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.dead.iter().filter(|d| !**d).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Adds `[lo, hi]` with `key`; returns a handle for deletion.
    pub fn insert(&mut self, lo: Coord, hi: Coord, key: T) -> u32 {
        assert!(lo <= hi, "empty interval");
        let id = self.items.len() as u32;
        let (b, t) = ((lo.clone(), 0u8), (hi.clone(), 1u8));
        self.tree.insert_key(b.clone(), ());
        self.tree.insert_key(t.clone(), ());
        self.tree.insert_interval(Some(b), t, (key.clone(), id));
        self.items.push((Interval { lo, hi }, key));
        self.dead.push(false);
        id
    }

    /// Marks the interval deleted; later queries skip it.
    pub fn delete(&mut self, handle: u32) -> bool {
        match self.dead.get_mut(handle as usize) {
            Some(d) if !*d => {
                *d = true;
                true
            }
            _ => false,
        }
    }

    /// Minimum-key live interval containing `y`.
    pub fn query(&mut self, y: &Coord) -> Option<(Interval, T)> {
        let path = self.tree.path(&(y.clone(), 1));
        let mut best: Option<(T, u32)> = None;
        for v in path {
            // purge tombstones at the top of this node's heap
            loop {
                let dead = match self.tree.view(v).payload.0.peek() {
                    Some(Reverse((_, id))) => self.dead[*id as usize],
                    None => false,
                };
                if !dead {
                    break;
                }
                self.tree.payload_mut(v).0.pop();
            }
            if let Some(Reverse(top)) = self.tree.view(v).payload.0.peek() {
                if best.as_ref().is_none_or(|b| top < b) {
                    best = Some(top.clone());
                }
            }
        }
        best.map(|(_, id)| self.items[id as usize].clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let mut s = StabbingMinSet::new();
        s.insert(0.into(), 10.into(), 3);
        s.insert(2.into(), 6.into(), 1);
        assert_eq!(s.query(&4.into()), Some((Interval { lo: 2.into(), hi: 6.into() }, 1)));
        assert_eq!(s.query(&8.into()), Some((Interval { lo: 0.into(), hi: 10.into() }, 3)));
        assert_eq!(s.query(&11.into()), None);
        assert_eq!(s.query(&2.into()).map(|r| r.1), Some(1));
        assert_eq!(s.query(&10.into()).map(|r| r.1), Some(3));
    }

    #[test]
    fn tombstones_are_skipped() {
        let mut s = StabbingMinSet::new();
        s.insert(0.into(), 10.into(), 3);
        let h = s.insert(2.into(), 6.into(), 1);
        assert!(s.delete(h));
        assert!(!s.delete(h));
        assert_eq!(s.query(&4.into()).map(|r| r.1), Some(3));
    }
}
