//! Clique (flag) complexes: complete subgraphs, f-vectors and Euler characteristic.
//!
//! A simplex is stored as the vertex-index mask of its clique. Dimensions are
//! 0-based: vertices are 0-simplices, edges 1-simplices, triangles 2-simplices.

use std::collections::HashMap;

use crate::bits::{above, popcount, Bits};
use crate::graph::SimpleGraph;

/// Calls `f(clique_mask)` for every non-empty clique inside `mask`, in
/// lexicographic order of the ascending vertex sequences.
pub fn for_each_clique(adj: &[u64], mask: u64, f: &mut impl FnMut(u64)) {
    fn rec(adj: &[u64], clique: u64, cand: u64, f: &mut impl FnMut(u64)) {
        for v in Bits(cand) {
            let c = clique | 1 << v;
            f(c);
            let next = cand & adj[v] & above(v);
            if next != 0 {
                rec(adj, c, next, f);
            }
        }
    }
    rec(adj, 0, mask, f);
}

/// f-vector of the clique complex of the subgraph generated by `mask`:
/// entry `k` counts the cliques with `k + 1` vertices.
pub fn fvector_mask(adj: &[u64], mask: u64) -> Vec<usize> {
    fn rec(adj: &[u64], depth: usize, cand: u64, f: &mut Vec<usize>) {
        if f.len() <= depth {
            f.push(0);
        }
        f[depth] += popcount(cand);
        for v in Bits(cand) {
            let next = cand & adj[v] & above(v);
            if next != 0 {
                rec(adj, depth + 1, next, f);
            }
        }
    }
    let mut f = Vec::new();
    if mask != 0 {
        rec(adj, 0, mask, &mut f);
    }
    f
}

/// Euler characteristic of the clique complex of the subgraph generated by `mask`.
pub fn euler_mask(adj: &[u64], mask: u64) -> i64 {
    fn rec(adj: &[u64], sign: i64, cand: u64) -> i64 {
        let mut total = 0;
        for v in Bits(cand) {
            total += sign;
            let next = cand & adj[v] & above(v);
            if next != 0 {
                total += rec(adj, -sign, next);
            }
        }
        total
    }
    rec(adj, 1, mask)
}

pub fn fvector(g: &SimpleGraph) -> Vec<usize> {
    fvector_mask(g.adjacency(), g.full_mask())
}

pub fn euler_characteristic(g: &SimpleGraph) -> i64 {
    euler_mask(g.adjacency(), g.full_mask())
}

/// The clique complex of a graph with every simplex listed by dimension.
#[derive(Clone, Debug)]
pub struct CliqueComplex {
    strata: Vec<Vec<u64>>,
    index: Vec<HashMap<u64, usize>>,
}

impl CliqueComplex {
    pub fn new(g: &SimpleGraph) -> Self {
        Self::from_mask(g.adjacency(), g.full_mask())
    }

    pub fn from_mask(adj: &[u64], mask: u64) -> Self {
        let mut strata: Vec<Vec<u64>> = Vec::new();
        for_each_clique(adj, mask, &mut |c| {
            let k = popcount(c) - 1;
            if strata.len() <= k {
                strata.resize_with(k + 1, Vec::new);
            }
            strata[k].push(c);
        });
        let index = strata
            .iter()
            .map(|s| s.iter().enumerate().map(|(i, &m)| (m, i)).collect())
            .collect();
        Self { strata, index }
    }

    /// Top dimension, or `None` for the empty complex.
    pub fn dim(&self) -> Option<usize> {
        self.strata.len().checked_sub(1)
    }

    /// Number of strata (top dimension + 1).
    pub fn len(&self) -> usize {
        self.strata.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strata.is_empty()
    }

    pub fn count(&self, k: usize) -> usize {
        self.strata.get(k).map_or(0, Vec::len)
    }

    pub fn simplices(&self, k: usize) -> &[u64] {
        self.strata.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn index_of(&self, k: usize, simplex: u64) -> Option<usize> {
        self.index.get(k)?.get(&simplex).copied()
    }

    pub fn fvector(&self) -> Vec<usize> {
        self.strata.iter().map(Vec::len).collect()
    }

    pub fn euler(&self) -> i64 {
        self.strata
            .iter()
            .enumerate()
            .map(|(k, s)| if k % 2 == 0 { s.len() as i64 } else { -(s.len() as i64) })
            .sum()
    }
}
