//! Finite simple graphs on at most 64 labelled vertices.
//!
//! Vertices carry arbitrary `u32` labels but are stored in ascending label
//! order, so index `i` always refers to the `i`-th smallest label. Adjacency
//! is one `u64` mask per vertex, which keeps every subgraph query a handful
//! of bit operations.

use serde::{Deserialize, Serialize};

use crate::bits::{bit, low_mask, lowest, Bits};
use crate::error::{Error, Result};

pub const MAX_VERTICES: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "GraphRepr", into = "GraphRepr")]
pub struct SimpleGraph {
    labels: Vec<u32>,
    adj: Vec<u64>,
}

impl SimpleGraph {
    /// The empty graph.
    pub fn new() -> Self {
        Self::default()
    }

    /// Graph with the given vertices and no edges.
    pub fn discrete(labels: impl IntoIterator<Item = u32>) -> Result<Self> {
        Self::from_edges(labels, std::iter::empty())
    }

    /// Builds a graph from an explicit vertex list plus edges. Endpoints not in
    /// `vertices` are added; repeated edges are merged.
    pub fn from_edges(
        vertices: impl IntoIterator<Item = u32>,
        edges: impl IntoIterator<Item = (u32, u32)>,
    ) -> Result<Self> {
        let edges: Vec<(u32, u32)> = edges.into_iter().collect();
        let mut labels: Vec<u32> = vertices.into_iter().collect();
        for &(u, v) in &edges {
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            labels.push(u);
            labels.push(v);
        }
        labels.sort_unstable();
        labels.dedup();
        if labels.len() > MAX_VERTICES {
            return Err(Error::TooManyVertices(labels.len()));
        }
        let mut adj = vec![0u64; labels.len()];
        for (u, v) in edges {
            let i = labels.binary_search(&u).unwrap();
            let j = labels.binary_search(&v).unwrap();
            adj[i] |= bit(j);
            adj[j] |= bit(i);
        }
        Ok(Self { labels, adj })
    }

    /// Builds a graph on labels `0..n` from index pairs.
    pub fn from_index_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        Self::from_edges(
            0..n as u32,
            edges.iter().map(|&(u, v)| (u as u32, v as u32)),
        )
    }

    /// Wraps raw adjacency masks. `labels` must be strictly ascending and the
    /// masks symmetric and loop-free.
    pub(crate) fn from_parts(labels: Vec<u32>, adj: Vec<u64>) -> Self {
        debug_assert_eq!(labels.len(), adj.len());
        debug_assert!(labels.windows(2).all(|w| w[0] < w[1]));
        debug_assert!((0..adj.len()).all(|i| adj[i] >> i & 1 == 0
            && Bits(adj[i]).all(|j| adj[j] >> i & 1 == 1)));
        Self { labels, adj }
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn size(&self) -> usize {
        self.adj.iter().map(|m| m.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> u32 {
        self.labels[i]
    }

    pub fn index_of(&self, label: u32) -> Option<usize> {
        self.labels.binary_search(&label).ok()
    }

    pub fn try_index(&self, label: u32) -> Result<usize> {
        self.index_of(label).ok_or(Error::UnknownVertex(label))
    }

    pub fn contains(&self, label: u32) -> bool {
        self.index_of(label).is_some()
    }

    /// Neighbourhood mask of the vertex at index `i`.
    #[inline]
    pub fn adj(&self, i: usize) -> u64 {
        self.adj[i]
    }

    pub fn adjacency(&self) -> &[u64] {
        &self.adj
    }

    /// Mask containing every vertex.
    pub fn full_mask(&self) -> u64 {
        low_mask(self.order())
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].count_ones() as usize
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        match (self.index_of(u), self.index_of(v)) {
            (Some(i), Some(j)) => self.adj[i] >> j & 1 == 1,
            _ => false,
        }
    }

    /// Edges as index pairs `(i, j)` with `i < j`, in lexicographic order.
    pub fn edge_indices(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.size());
        for i in 0..self.order() {
            for j in Bits(self.adj[i] & !low_mask(i + 1)) {
                out.push((i, j));
            }
        }
        out
    }

    /// Edges as label pairs `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(u32, u32)> {
        self.edge_indices()
            .into_iter()
            .map(|(i, j)| (self.labels[i], self.labels[j]))
            .collect()
    }

    pub fn neighbors(&self, label: u32) -> Result<Vec<u32>> {
        let i = self.try_index(label)?;
        Ok(self.labels_of(self.adj[i]))
    }

    pub fn labels_of(&self, mask: u64) -> Vec<u32> {
        Bits(mask).map(|i| self.labels[i]).collect()
    }

    pub fn mask_of(&self, labels: &[u32]) -> Result<u64> {
        labels
            .iter()
            .try_fold(0u64, |m, &l| Ok(m | bit(self.try_index(l)?)))
    }

    /// Subgraph generated by the vertices in `mask`.
    pub fn induced(&self, mask: u64) -> SimpleGraph {
        let idx: Vec<usize> = Bits(mask).collect();
        let labels = idx.iter().map(|&i| self.labels[i]).collect();
        let adj = idx
            .iter()
            .map(|&i| crate::bits::compress(self.adj[i] & mask, mask))
            .collect();
        SimpleGraph::from_parts(labels, adj)
    }

    pub fn induced_by_labels(&self, labels: &[u32]) -> Result<SimpleGraph> {
        Ok(self.induced(self.mask_of(labels)?))
    }

    /// Unit sphere of a vertex: the subgraph generated by its neighbours.
    pub fn sphere(&self, label: u32) -> Result<SimpleGraph> {
        let i = self.try_index(label)?;
        Ok(self.induced(self.adj[i]))
    }

    /// Connected components of the subgraph generated by `mask`, each as a mask,
    /// ordered by lowest vertex.
    pub fn components_of(&self, mask: u64) -> Vec<u64> {
        components(&self.adj, mask)
    }

    pub fn components(&self) -> Vec<u64> {
        self.components_of(self.full_mask())
    }

    pub fn is_connected(&self) -> bool {
        self.order() > 0 && self.components().len() == 1
    }

    /// True if the vertices of `mask` are pairwise adjacent.
    pub fn is_clique(&self, mask: u64) -> bool {
        is_clique(&self.adj, mask)
    }

    /// Adds a new vertex joined to the vertices `over`.
    pub fn with_vertex(&self, label: u32, over: &[u32]) -> Result<SimpleGraph> {
        if self.contains(label) {
            return Err(Error::DuplicateVertex(label));
        }
        for &w in over {
            self.try_index(w)?;
        }
        let mut edges = self.edges();
        edges.extend(over.iter().map(|&w| (label, w)));
        let mut verts = self.labels.clone();
        verts.push(label);
        SimpleGraph::from_edges(verts, edges)
    }

    pub fn without_vertex(&self, label: u32) -> Result<SimpleGraph> {
        let i = self.try_index(label)?;
        Ok(self.induced(self.full_mask() & !bit(i)))
    }

    pub fn with_edge(&self, u: u32, v: u32) -> Result<SimpleGraph> {
        let i = self.try_index(u)?;
        let j = self.try_index(v)?;
        if i == j {
            return Err(Error::SelfLoop(u));
        }
        let mut g = self.clone();
        g.adj[i] |= bit(j);
        g.adj[j] |= bit(i);
        Ok(g)
    }

    pub fn without_edge(&self, u: u32, v: u32) -> Result<SimpleGraph> {
        let i = self.try_index(u)?;
        let j = self.try_index(v)?;
        let mut g = self.clone();
        g.adj[i] &= !bit(j);
        g.adj[j] &= !bit(i);
        Ok(g)
    }

    /// Applies an injective relabelling.
    pub fn relabel(&self, f: impl Fn(u32) -> u32) -> Result<SimpleGraph> {
        let verts: Vec<u32> = self.labels.iter().map(|&l| f(l)).collect();
        let mut check = verts.clone();
        check.sort_unstable();
        if let Some(w) = check.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateVertex(w[0]));
        }
        let edges = self.edges().into_iter().map(|(u, v)| (f(u), f(v)));
        SimpleGraph::from_edges(verts, edges)
    }

    /// Same graph with labels replaced by `0..n` in ascending order.
    pub fn normalized(&self) -> SimpleGraph {
        SimpleGraph::from_parts((0..self.order() as u32).collect(), self.adj.clone())
    }

    /// Smallest label not used by the graph, starting the search at `from`.
    pub fn fresh_label(&self, from: u32) -> u32 {
        let mut l = from;
        while self.contains(l) {
            l += 1;
        }
        l
    }
}

/// Serialised shape of a graph: explicit vertex list plus edge pairs.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphRepr {
    pub vertices: Vec<u32>,
    pub edges: Vec<(u32, u32)>,
}

impl TryFrom<GraphRepr> for SimpleGraph {
    type Error = Error;

    fn try_from(r: GraphRepr) -> Result<Self> {
        for &(u, v) in &r.edges {
            for w in [u, v] {
                if !r.vertices.contains(&w) {
                    return Err(Error::UnknownVertex(w));
                }
            }
        }
        SimpleGraph::from_edges(r.vertices, r.edges)
    }
}

impl From<SimpleGraph> for GraphRepr {
    fn from(g: SimpleGraph) -> Self {
        GraphRepr {
            edges: g.edges(),
            vertices: g.labels,
        }
    }
}

/// Connected components of the vertex set `mask` under adjacency `adj`.
pub fn components(adj: &[u64], mut mask: u64) -> Vec<u64> {
    let mut out = Vec::new();
    while mask != 0 {
        let comp = component_of(adj, mask, lowest(mask));
        out.push(comp);
        mask &= !comp;
    }
    out
}

/// Component of `start` inside the vertex set `mask`.
pub fn component_of(adj: &[u64], mask: u64, start: usize) -> u64 {
    let mut seen = bit(start);
    let mut frontier = seen;
    while frontier != 0 {
        let mut next = 0u64;
        for v in Bits(frontier) {
            next |= adj[v];
        }
        next &= mask & !seen;
        seen |= next;
        frontier = next;
    }
    seen
}

pub fn is_connected_mask(adj: &[u64], mask: u64) -> bool {
    mask != 0 && component_of(adj, mask, lowest(mask)) == mask
}

pub fn is_clique(adj: &[u64], mask: u64) -> bool {
    Bits(mask).all(|i| adj[i] & mask == mask & !bit(i))
}

/// A vertex of `mask` adjacent to every other vertex of `mask`, if any.
pub fn cone_apex(adj: &[u64], mask: u64) -> Option<usize> {
    Bits(mask).find(|&i| adj[i] & mask == mask & !bit(i))
}
