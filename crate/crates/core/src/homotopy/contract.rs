//! Contractibility by exhaustive vertex-collapse search.
//!
//! A graph is contractible when it is a single vertex, or when some vertex has
//! a contractible unit sphere and the graph with that vertex removed is
//! contractible. The empty graph is not contractible. The search works on
//! vertex masks of one host graph and memoises every mask it settles, so
//! nested sphere checks share work.

use std::collections::HashMap;

use parking_lot::RwLock;

use crate::bits::{bit, popcount, Bits};
use crate::canon::{certificate, Certificate};
use crate::complex::euler_mask;
use crate::graph::{cone_apex, is_clique, is_connected_mask, SimpleGraph};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CollapseStats {
    /// Masks settled by the full search (shortcuts excluded).
    pub searched: usize,
    pub memo_hits: usize,
    /// Masks where the first removable vertex tried led to a dead end but a
    /// later one succeeded, i.e. a greedy collapse would have failed.
    pub backtracks: usize,
}

/// Contractibility oracle over the vertex subsets of one host graph.
#[derive(Clone, Debug)]
pub struct Collapser {
    adj: Vec<u64>,
    memo: HashMap<u64, Option<u8>>,
    pub stats: CollapseStats,
}

impl Collapser {
    pub fn new(g: &SimpleGraph) -> Self {
        Self::from_adjacency(g.adjacency().to_vec())
    }

    pub fn from_adjacency(adj: Vec<u64>) -> Self {
        Self {
            adj,
            memo: HashMap::new(),
            stats: CollapseStats::default(),
        }
    }

    pub fn adjacency(&self) -> &[u64] {
        &self.adj
    }

    /// Is the subgraph generated by `m` contractible?
    pub fn contractible(&mut self, m: u64) -> bool {
        match popcount(m) {
            0 => return false,
            1 => return true,
            _ => {}
        }
        if cone_apex(&self.adj, m).is_some() {
            return true;
        }
        if let Some(w) = self.memo.get(&m) {
            self.stats.memo_hits += 1;
            return w.is_some();
        }
        let verdict = self.search(m);
        self.memo.insert(m, verdict);
        verdict.is_some()
    }

    fn search(&mut self, m: u64) -> Option<u8> {
        self.stats.searched += 1;
        if !is_connected_mask(&self.adj, m) {
            return None;
        }
        if popcount(m) >= 4 && euler_mask(&self.adj, m) != 1 {
            return None;
        }
        let mut dead_end = false;
        for x in Bits(m) {
            let rest = m & !bit(x);
            if self.contractible(self.adj[x] & rest) {
                if self.contractible(rest) {
                    if dead_end {
                        self.stats.backtracks += 1;
                    }
                    return Some(x as u8);
                }
                dead_end = true;
            }
        }
        None
    }

    /// Vertices of `m` whose sphere inside `m` is contractible.
    pub fn removable(&mut self, m: u64) -> u64 {
        let mut out = 0;
        for x in Bits(m) {
            if popcount(m) > 1 && self.contractible(self.adj[x] & m & !bit(x)) {
                out |= bit(x);
            }
        }
        out
    }

    /// A vertex whose removal keeps `m` contractible, for contractible `m`
    /// with at least two vertices. Prefers the smallest index.
    fn collapse_step(&mut self, m: u64) -> usize {
        if is_clique(&self.adj, m) {
            return Bits(m).next().unwrap();
        }
        if let Some(a) = cone_apex(&self.adj, m) {
            return Bits(m & !bit(a)).next().unwrap();
        }
        match self.memo.get(&m) {
            Some(Some(x)) => *x as usize,
            _ => unreachable!("collapse_step on a mask not known to be contractible"),
        }
    }

    /// Removal sequence that collapses `m` to a single vertex, or `None` if `m`
    /// is not contractible. The last remaining vertex is not listed.
    pub fn removal_order(&mut self, m: u64) -> Option<Vec<usize>> {
        if !self.contractible(m) {
            return None;
        }
        let mut cur = m;
        let mut out = Vec::new();
        while popcount(cur) > 1 {
            let x = self.collapse_step(cur);
            out.push(x);
            cur &= !bit(x);
        }
        Some(out)
    }
}

pub fn is_contractible(g: &SimpleGraph) -> bool {
    Collapser::new(g).contractible(g.full_mask())
}

/// Labels removed, in order, to collapse `g` to one vertex.
pub fn contraction_witness(g: &SimpleGraph) -> Option<Vec<u32>> {
    Collapser::new(g)
        .removal_order(g.full_mask())
        .map(|v| v.into_iter().map(|i| g.label(i)).collect())
}

/// Vertices whose unit sphere is contractible, ascending by label.
pub fn removable_vertices(g: &SimpleGraph) -> Vec<u32> {
    let mut c = Collapser::new(g);
    g.labels_of(c.removable(g.full_mask()))
}

/// Thread-safe contractibility memo keyed by isomorphism certificate.
#[derive(Debug, Default)]
pub struct ContractibilityCache {
    map: RwLock<HashMap<Certificate, bool>>,
}

impl ContractibilityCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_contractible(&self, g: &SimpleGraph) -> bool {
        if g.order() <= 1 {
            return g.order() == 1;
        }
        let key = certificate(g);
        if let Some(&v) = self.map.read().get(&key) {
            return v;
        }
        let v = is_contractible(g);
        self.map.write().insert(key, v);
        v
    }

    pub fn len(&self) -> usize {
        self.map.read().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize, e: &[(usize, usize)]) -> SimpleGraph {
        SimpleGraph::from_index_edges(n, e).unwrap()
    }

    fn cycle(n: usize) -> SimpleGraph {
        g(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>())
    }

    #[test]
    fn small_cases() {
        assert!(!is_contractible(&SimpleGraph::new()));
        assert!(is_contractible(&g(1, &[])));
        assert!(!is_contractible(&g(2, &[])));
        assert!(is_contractible(&g(2, &[(0, 1)])));
        assert!(is_contractible(&g(4, &[(0, 1), (1, 2), (2, 3)])));
        assert!(!is_contractible(&g(3, &[(0, 1)])));
        for n in 4..9 {
            assert!(!is_contractible(&cycle(n)));
        }
        assert!(is_contractible(&cycle(3)));
    }

    #[test]
    fn wheel_and_witness() {
        let mut e: Vec<(usize, usize)> = (1..=5).map(|i| (0, i)).collect();
        e.extend((1..=5).map(|i| (i, i % 5 + 1)));
        let w = g(6, &e);
        assert!(is_contractible(&w));
        let order = contraction_witness(&w).unwrap();
        assert_eq!(order.len(), 5);
        let mut cur = w.clone();
        for x in order {
            assert!(is_contractible(&cur.sphere(x).unwrap()));
            cur = cur.without_vertex(x).unwrap();
        }
        assert_eq!(cur.order(), 1);
    }

    #[test]
    fn removable_in_cycle_plus_chord() {
        // C4 with one chord: two triangles glued along an edge.
        let d = g(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]);
        assert_eq!(removable_vertices(&d), vec![0, 1, 2, 3]);
        assert!(removable_vertices(&cycle(5)).is_empty());
    }

    #[test]
    fn cache_agrees() {
        let cache = ContractibilityCache::new();
        assert!(!cache.is_contractible(&cycle(5)));
        assert!(!cache.is_contractible(&cycle(5).relabel(|l| l + 10).unwrap()));
        assert_eq!(cache.len(), 1);
        assert!(cache.is_contractible(&g(1, &[])));
    }
}
