//! Canonical labelling and isomorphism certificates.
//!
//! Disconnected graphs are canonised component by component, graphs with a
//! disconnected complement through the complement, and everything else by an
//! individualisation-refinement search. Leaves are ranked by the sequence of
//! refinement traces along their path and then by the adjacency certificate;
//! both are isomorphism invariant, so the maximal leaf is canonical.

use std::cmp::Ordering;
use std::fmt;

use crate::bits::{bit, popcount, Bits};
use crate::graph::{components, SimpleGraph};

/// Isomorphism-class certificate: the order followed by the strictly lower
/// adjacency rows in canonical vertex order. Equal certificates mean
/// isomorphic graphs.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Certificate(Vec<u64>);

impl Certificate {
    pub fn order(&self) -> usize {
        self.0.len()
    }

    pub fn rows(&self) -> &[u64] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        let mut s = format!("{:02x}", self.0.len());
        for (p, &row) in self.0.iter().enumerate() {
            let bytes = p.div_ceil(8);
            for b in 0..bytes {
                s.push_str(&format!("{:02x}", (row >> (8 * b)) & 0xff));
            }
        }
        s
    }

    /// Graph on `0..n` realising this certificate.
    pub fn to_graph(&self) -> SimpleGraph {
        let n = self.0.len();
        let mut edges = Vec::new();
        for (p, &row) in self.0.iter().enumerate() {
            for q in Bits(row) {
                edges.push((q, p));
            }
        }
        SimpleGraph::from_index_edges(n, &edges).expect("certificate rows are well formed")
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

#[derive(Clone, Debug)]
pub struct CanonicalForm {
    /// `order[p]` is the vertex index placed at canonical position `p`.
    pub order: Vec<usize>,
    pub certificate: Certificate,
}

impl CanonicalForm {
    /// Canonical position of each vertex index.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.order.len()];
        for (p, &v) in self.order.iter().enumerate() {
            pos[v] = p;
        }
        pos
    }
}

pub fn canonical_form(g: &SimpleGraph) -> CanonicalForm {
    let order = canon_order(g.adjacency(), g.full_mask());
    let certificate = certificate_for(g.adjacency(), &order);
    CanonicalForm { order, certificate }
}

pub fn certificate(g: &SimpleGraph) -> Certificate {
    canonical_form(g).certificate
}

/// The graph relabelled to `0..n` in canonical order.
pub fn canonical_graph(g: &SimpleGraph) -> SimpleGraph {
    canonical_form(g).certificate.to_graph()
}

pub fn is_isomorphic(g: &SimpleGraph, h: &SimpleGraph) -> bool {
    g.order() == h.order() && g.size() == h.size() && certificate(g) == certificate(h)
}

/// An isomorphism from `g` to `h` as label pairs, if one exists.
pub fn isomorphism(g: &SimpleGraph, h: &SimpleGraph) -> Option<Vec<(u32, u32)>> {
    if g.order() != h.order() || g.size() != h.size() {
        return None;
    }
    let cg = canonical_form(g);
    let ch = canonical_form(h);
    if cg.certificate != ch.certificate {
        return None;
    }
    let mut map: Vec<(u32, u32)> = cg
        .order
        .iter()
        .zip(&ch.order)
        .map(|(&a, &b)| (g.label(a), h.label(b)))
        .collect();
    map.sort_unstable();
    Some(map)
}

/// Certificate of the vertex sequence `order` under adjacency `adj`.
pub fn certificate_for(adj: &[u64], order: &[usize]) -> Certificate {
    Certificate(rows_for(adj, order))
}

fn rows_for(adj: &[u64], order: &[usize]) -> Vec<u64> {
    let mut rows = Vec::with_capacity(order.len());
    for (p, &v) in order.iter().enumerate() {
        let mut row = 0u64;
        for (q, &w) in order[..p].iter().enumerate() {
            if adj[v] >> w & 1 == 1 {
                row |= 1 << q;
            }
        }
        rows.push(row);
    }
    rows
}

fn canon_order(adj: &[u64], mask: u64) -> Vec<usize> {
    if popcount(mask) <= 1 {
        return Bits(mask).collect();
    }
    let comps = components(adj, mask);
    if comps.len() > 1 {
        let mut parts: Vec<(usize, Vec<u64>, Vec<usize>)> = comps
            .into_iter()
            .map(|c| {
                let ord = canon_order(adj, c);
                (ord.len(), rows_for(adj, &ord), ord)
            })
            .collect();
        parts.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
        return parts.into_iter().flat_map(|p| p.2).collect();
    }
    let mut co = vec![0u64; adj.len()];
    for v in Bits(mask) {
        co[v] = !adj[v] & mask & !bit(v);
    }
    if components(&co, mask).len() > 1 {
        return canon_order(&co, mask);
    }
    Search::new(adj).run(mask)
}

fn mix(h: u64, x: u64) -> u64 {
    (h ^ x).wrapping_mul(0x0000_0100_0000_01b3).rotate_left(5)
}

/// Refines an ordered partition until it is equitable, using the masks in
/// `queue` as initial splitters. Returns a trace hash of the splits.
fn refine(adj: &[u64], cells: &mut Vec<Vec<usize>>, mut queue: Vec<u64>) -> u64 {
    let mut trace = 0xcbf2_9ce4_8422_2325u64;
    while let Some(w) = queue.pop() {
        let mut i = 0;
        while i < cells.len() {
            if cells[i].len() > 1 {
                let mut keyed: Vec<(u32, usize)> = cells[i]
                    .iter()
                    .map(|&v| ((adj[v] & w).count_ones(), v))
                    .collect();
                if keyed.iter().any(|k| k.0 != keyed[0].0) {
                    keyed.sort_unstable();
                    let mut pieces: Vec<Vec<usize>> = Vec::new();
                    let mut last = u32::MAX;
                    for (c, v) in keyed {
                        if c != last {
                            pieces.push(Vec::new());
                            last = c;
                            trace = mix(trace, (i as u64) << 32 | c as u64);
                        }
                        pieces.last_mut().unwrap().push(v);
                    }
                    for p in &pieces {
                        trace = mix(trace, p.len() as u64);
                        queue.push(p.iter().fold(0, |m, &v| m | bit(v)));
                    }
                    let np = pieces.len();
                    cells.splice(i..=i, pieces);
                    i += np;
                    continue;
                }
            }
            i += 1;
        }
    }
    mix(trace, cells.len() as u64)
}

struct Search<'a> {
    adj: &'a [u64],
    best: Option<(Vec<u64>, Vec<u64>, Vec<usize>)>,
    autos: Vec<[u8; 64]>,
}

impl<'a> Search<'a> {
    fn new(adj: &'a [u64]) -> Self {
        Self {
            adj,
            best: None,
            autos: Vec::new(),
        }
    }

    fn run(mut self, mask: u64) -> Vec<usize> {
        let mut cells = vec![Bits(mask).collect::<Vec<_>>()];
        let t = refine(self.adj, &mut cells, vec![mask]);
        self.visit(cells, vec![t], &mut Vec::new());
        self.best.expect("search reaches a leaf").2
    }

    fn visit(&mut self, cells: Vec<Vec<usize>>, path: Vec<u64>, fixed: &mut Vec<usize>) {
        if let Some((bp, _, _)) = &self.best {
            let common = bp.len().min(path.len());
            match path[..common].cmp(&bp[..common]) {
                Ordering::Less => return,
                Ordering::Greater => self.best = None,
                Ordering::Equal => {
                    if bp.len() < path.len() {
                        self.best = None;
                    }
                }
            }
        }
        let Some(ci) = cells.iter().position(|c| c.len() > 1) else {
            let order: Vec<usize> = cells.into_iter().map(|c| c[0]).collect();
            let rows = rows_for(self.adj, &order);
            match &self.best {
                None => self.best = Some((path, rows, order)),
                Some((bp, br, bo)) => match (&path, &rows).cmp(&(bp, br)) {
                    Ordering::Greater => self.best = Some((path, rows, order)),
                    Ordering::Equal => {
                        let mut g = [0u8; 64];
                        for (i, x) in g.iter_mut().enumerate() {
                            *x = i as u8;
                        }
                        for (&a, &b) in bo.iter().zip(&order) {
                            g[a] = b as u8;
                        }
                        self.autos.push(g);
                    }
                    Ordering::Less => {}
                },
            }
            return;
        };
        let target = cells[ci].clone();
        let mut explored: Vec<usize> = Vec::new();
        for &v in &target {
            if !explored.is_empty() && self.same_orbit(fixed, &explored, v) {
                continue;
            }
            explored.push(v);
            let mut child = cells.clone();
            let rest: Vec<usize> = target.iter().copied().filter(|&u| u != v).collect();
            child.splice(ci..=ci, [vec![v], rest]);
            let t = refine(self.adj, &mut child, vec![bit(v)]);
            let mut p = path.clone();
            p.push(t);
            fixed.push(v);
            self.visit(child, p, fixed);
            fixed.pop();
        }
    }

    /// True if `v` lies in the orbit of an explored vertex under the known
    /// automorphisms that fix `fixed` pointwise.
    fn same_orbit(&self, fixed: &[usize], explored: &[usize], v: usize) -> bool {
        let gens: Vec<&[u8; 64]> = self
            .autos
            .iter()
            .filter(|g| fixed.iter().all(|&f| g[f] as usize == f))
            .collect();
        if gens.is_empty() {
            return false;
        }
        let mut orbit = bit(v);
        let mut frontier = orbit;
        while frontier != 0 {
            let mut next = 0u64;
            for x in Bits(frontier) {
                for g in &gens {
                    next |= bit(g[x] as usize);
                }
            }
            next &= !orbit;
            orbit |= next;
            frontier = next;
        }
        explored.iter().any(|&u| orbit >> u & 1 == 1)
    }
}
