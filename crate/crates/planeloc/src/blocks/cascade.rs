//! Repeated predecessor search along root-to-leaf paths.
//!
//! `CascadeTree` holds one sorted list per tree node. With
//! [`Strategy::Cascading`] each node's list is augmented with every fourth
//! element of its parent's augmented list, so a search binary-searches only
//! at the bottom of the path and walks up with a constant number of steps
//! per level.

use std::cmp::Ordering;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    Cascading,
    #[default]
    PlainBinary,
}

const SAMPLE: usize = 4;

#[derive(Debug, Clone)]
struct Aug<E> {
    elem: E,
    native_pred: Option<u32>,
    up_pred: Option<u32>,
}

#[derive(Debug, Clone)]
pub struct CascadeTree<E> {
    parent: Vec<Option<usize>>,
    native: Vec<Vec<E>>,
    aug: Vec<Vec<Aug<E>>>,
    strategy: Strategy,
}

impl<E: Clone> CascadeTree<E> {
    /// `parent[v] < v` must hold for every non-root node. `cmp(v, a, b)`
    /// orders elements as seen from node `v`.
    pub fn build(
        parent: Vec<Option<usize>>,
        native: Vec<Vec<E>>,
        strategy: Strategy,
        cmp: impl Fn(usize, &E, &E) -> Ordering,
    ) -> CascadeTree<E> {
        assert_eq!(parent.len(), native.len());
        let mut aug: Vec<Vec<Aug<E>>> = Vec::new();
        if strategy == Strategy::Cascading {
            for v in 0..native.len() {
                // sampled parent elements: (element, index in parent's list)
                let sampled: Vec<(E, u32)> = match parent[v] {
                    Some(p) => {
                        debug_assert!(p < v);
                        aug[p]
                            .iter()
                            .enumerate()
                            .skip(SAMPLE - 1)
                            .step_by(SAMPLE)
                            .map(|(i, a)| (a.elem.clone(), i as u32))
                            .collect()
                    }
                    None => Vec::new(),
                };
                let nat = &native[v];
                let mut out = Vec::with_capacity(nat.len() + sampled.len());
                let (mut i, mut j) = (0, 0);
                let mut last_native: Option<u32> = None;
                let mut last_up: Option<u32> = None;
                while i < nat.len() || j < sampled.len() {
                    let take_native =
                        j >= sampled.len() || (i < nat.len() && cmp(v, &nat[i], &sampled[j].0) != Ordering::Greater);
                    if take_native {
                        last_native = Some(i as u32);
                        out.push(Aug { elem: nat[i].clone(), native_pred: last_native, up_pred: last_up });
                        i += 1;
                    } else {
                        last_up = Some(sampled[j].1);
                        out.push(Aug { elem: sampled[j].0.clone(), native_pred: last_native, up_pred: last_up });
                        j += 1;
                    }
                }
                aug.push(out);
            }
        }
        CascadeTree { parent, native, aug, strategy }
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    pub fn native(&self, v: usize) -> &[E] {
        &self.native[v]
    }

    pub fn node_count(&self) -> usize {
        self.native.len()
    }

    /// Total augmented entries (equals the native total for plain search).
    pub fn size(&self) -> usize {
        if self.aug.is_empty() {
            self.native.iter().map(Vec::len).sum()
        } else {
            self.aug.iter().map(Vec::len).sum()
        }
    }

    /// For each node of `path` (root first, each the parent of the next),
    /// the index of the last native element with `le(v, e)` true. `le`
    /// must be monotone (a true prefix) in every list.
    pub fn search_path(&self, path: &[usize], le: impl Fn(usize, &E) -> bool) -> Vec<Option<usize>> {
        let mut out = vec![None; path.len()];
        match self.strategy {
            Strategy::PlainBinary => {
                for (k, &v) in path.iter().enumerate() {
                    let n = self.native[v].partition_point(|e| le(v, e));
                    out[k] = n.checked_sub(1);
                }
            }
            Strategy::Cascading => {
                if path.is_empty() {
                    return out;
                }
                for w in path.windows(2) {
                    debug_assert_eq!(self.parent[w[1]], Some(w[0]));
                }
                let leaf = *path.last().unwrap();
                let n = self.aug[leaf].partition_point(|a| le(leaf, &a.elem));
                let mut pos: Option<usize> = n.checked_sub(1);
                for k in (0..path.len()).rev() {
                    let v = path[k];
                    let list = &self.aug[v];
                    out[k] = pos.and_then(|p| list[p].native_pred).map(|x| x as usize);
                    if k == 0 {
                        break;
                    }
                    let up = path[k - 1];
                    let plist = &self.aug[up];
                    let mut j: Option<usize> = pos.and_then(|p| list[p].up_pred).map(|x| x as usize);
                    loop {
                        let next = j.map_or(0, |x| x + 1);
                        if next < plist.len() && le(up, &plist[next].elem) {
                            j = Some(next);
                        } else {
                            break;
                        }
                    }
                    pos = j;
                }
            }
        }
        out
    }
}

/// A chain of sorted lists searched with one key.
#[derive(Debug, Clone)]
pub struct CascadeChain<K> {
    tree: CascadeTree<K>,
}

impl<K: Ord + Clone> CascadeChain<K> {
    pub fn new(lists: Vec<Vec<K>>, strategy: Strategy) -> CascadeChain<K> {
        for l in &lists {
            debug_assert!(l.windows(2).all(|w| w[0] <= w[1]), "lists must be sorted");
        }
        let parent = (0..lists.len()).map(|i| i.checked_sub(1)).collect();
        CascadeChain { tree: CascadeTree::build(parent, lists, strategy, |_, a, b| a.cmp(b)) }
    }

    /// Predecessor (largest element `<= key`) in every list.
    pub fn search(&self, key: &K) -> Vec<Option<K>> {
        let path: Vec<usize> = (0..self.tree.node_count()).collect();
        self.tree
            .search_path(&path, |_, e| e <= key)
            .into_iter()
            .enumerate()
            .map(|(v, i)| i.map(|i| self.tree.native(v)[i].clone()))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn both(lists: Vec<Vec<i32>>, key: i32) -> Vec<Option<i32>> {
        let a = CascadeChain::new(lists.clone(), Strategy::Cascading).search(&key);
        let b = CascadeChain::new(lists, Strategy::PlainBinary).search(&key);
        assert_eq!(a, b);
        a
    }

    #[test]
    fn chain_examples() {
        assert_eq!(both(vec![vec![1, 4, 9]], 5), vec![Some(4)]);
        assert_eq!(both(vec![vec![1, 4, 9], vec![2, 4]], 4), vec![Some(4), Some(4)]);
        assert_eq!(both(vec![vec![1, 4, 9], vec![2, 8], vec![]], 7), vec![Some(4), Some(2), None]);
    }

    #[test]
    fn long_chain_agrees() {
        let lists: Vec<Vec<i32>> = (0..12)
            .map(|i| (0..200).map(|j| (j * (i + 3)) % 997).collect())
            .map(|mut v: Vec<i32>| {
                v.sort();
                v
            })
            .collect();
        for key in -5..1000 {
            both(lists.clone(), key);
        }
    }
}
