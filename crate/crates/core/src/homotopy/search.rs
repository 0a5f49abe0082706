//! Reduction, bounded homotopy search and contractibility inside a host graph.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::bits::{bit, popcount, submasks, Bits};
use crate::canon::{canonical_form, certificate, isomorphism, Certificate};
use crate::cohomology::{betti, cup_length, trim_betti};
use crate::complex::euler_characteristic;
use crate::error::Result;
use crate::graph::SimpleGraph;
use crate::homotopy::contract::Collapser;
use crate::homotopy::moves::{apply_unchecked, HomotopyCertificate, Move};

/// Limits for the bounded searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    /// Extra vertices allowed above the larger endpoint.
    pub max_extra_vertices: usize,
    /// Total distinct graphs (up to isomorphism) the search may visit.
    pub max_states: usize,
    /// Allow edge additions and removals besides vertex moves.
    pub edge_moves: bool,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            max_extra_vertices: 2,
            max_states: 1_000_000,
            edge_moves: true,
        }
    }
}

/// Invariant that separates two graphs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "invariant", rename_all = "snake_case")]
pub enum DistinctWitness {
    Euler { left: i64, right: i64 },
    Betti { left: Vec<usize>, right: Vec<usize> },
    CupLength { left: usize, right: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Equivalent(HomotopyCertificate),
    Distinct(DistinctWitness),
    Unknown { explored: usize },
}

/// Greedy collapse: repeatedly removes the removable vertex that comes first
/// in the canonical order of the current graph. Returns the core and the
/// certificate of removals leading to it.
pub fn reduce(g: &SimpleGraph) -> (SimpleGraph, HomotopyCertificate) {
    let mut col = Collapser::new(g);
    let mut mask = g.full_mask();
    let mut cert = HomotopyCertificate::new(g.clone());
    loop {
        let removable = col.removable(mask);
        if removable == 0 {
            break;
        }
        let sub = g.induced(mask);
        let form = canonical_form(&sub);
        let idx: Vec<usize> = Bits(mask).collect();
        let x = form
            .order
            .iter()
            .map(|&p| idx[p])
            .find(|&i| removable >> i & 1 == 1)
            .unwrap();
        cert.moves.push(Move::RemoveVertex { vertex: g.label(x) });
        mask &= !bit(x);
    }
    (g.induced(mask), cert)
}

/// First invariant among Euler characteristic, Betti vector and cup length
/// on which the graphs differ.
pub fn distinguish(g: &SimpleGraph, h: &SimpleGraph) -> Option<DistinctWitness> {
    let (a, b) = (euler_characteristic(g), euler_characteristic(h));
    if a != b {
        return Some(DistinctWitness::Euler { left: a, right: b });
    }
    let (a, b) = (trim_betti(&betti(g)), trim_betti(&betti(h)));
    if a != b {
        return Some(DistinctWitness::Betti { left: a, right: b });
    }
    let (a, b) = (cup_length(g), cup_length(h));
    if let (Some(x), Some(y)) = (a.exact(), b.exact()) {
        if x != y {
            return Some(DistinctWitness::CupLength { left: x, right: y });
        }
    }
    None
}

/// All legal moves on `g` that keep at most `limit` vertices.
pub fn legal_moves(g: &SimpleGraph, limit: usize, edge_moves: bool) -> Vec<Move> {
    let mut col = Collapser::new(g);
    let full = g.full_mask();
    let mut out = Vec::new();
    for x in Bits(col.removable(full)) {
        out.push(Move::RemoveVertex { vertex: g.label(x) });
    }
    if g.order() < limit {
        let fresh = g.labels().last().map_or(0, |&l| l + 1);
        for m in submasks(full) {
            if m != 0 && col.contractible(m) {
                out.push(Move::AddVertex {
                    vertex: fresh,
                    over: g.labels_of(m),
                });
            }
        }
    }
    if edge_moves {
        for i in 0..g.order() {
            for j in i + 1..g.order() {
                if col.contractible(g.adj(i) & g.adj(j)) {
                    let (u, v) = (g.label(i), g.label(j));
                    out.push(if g.adj(i) >> j & 1 == 1 {
                        Move::RemoveEdge { u, v }
                    } else {
                        Move::AddEdge { u, v }
                    });
                }
            }
        }
    }
    out
}

struct Node {
    graph: SimpleGraph,
    parent: usize,
    mv: Option<Move>,
}

struct Side {
    nodes: Vec<Node>,
    seen: HashMap<Certificate, usize>,
    frontier: Vec<usize>,
}

impl Side {
    fn new(root: SimpleGraph) -> Self {
        let mut seen = HashMap::new();
        seen.insert(certificate(&root), 0);
        Side {
            nodes: vec![Node {
                graph: root,
                parent: usize::MAX,
                mv: None,
            }],
            seen,
            frontier: vec![0],
        }
    }

    /// Moves from the root to node `i`, each paired with the graph it acts on.
    fn path(&self, mut i: usize) -> Vec<(SimpleGraph, Move)> {
        let mut out = Vec::new();
        while let Some(mv) = &self.nodes[i].mv {
            let p = self.nodes[i].parent;
            out.push((self.nodes[p].graph.clone(), mv.clone()));
            i = p;
        }
        out.reverse();
        out
    }
}

/// Replays the moves of `steps` backwards onto `cur`, transporting labels
/// through `map` (labels of the far side graph to labels of `cur`).
fn replay_reversed(
    cur: &mut SimpleGraph,
    moves: &mut Vec<Move>,
    steps: &[(SimpleGraph, Move)],
    map: &mut HashMap<u32, u32>,
) -> Result<()> {
    for (before, mv) in steps.iter().rev() {
        let inv = mv.inverse(before)?;
        let ours = match &inv {
            Move::AddVertex { vertex, over } => {
                let fresh = cur.labels().last().map_or(0, |&l| l + 1);
                let over = over.iter().map(|w| map[w]).collect();
                map.insert(*vertex, fresh);
                Move::AddVertex { vertex: fresh, over }
            }
            Move::RemoveVertex { vertex } => {
                let v = map.remove(vertex).unwrap();
                Move::RemoveVertex { vertex: v }
            }
            other => other.map_labels(|l| map[&l]),
        };
        *cur = apply_unchecked(cur, &ours)?;
        moves.push(ours);
    }
    Ok(())
}

/// Searches for a homotopy between `g` and `h`. Invariants are compared
/// first; then both graphs are reduced and a bidirectional breadth-first
/// search over legal moves runs within `budget`.
pub fn homotopic_bounded(g: &SimpleGraph, h: &SimpleGraph, budget: &Budget) -> Verdict {
    if let Some(w) = distinguish(g, h) {
        return Verdict::Distinct(w);
    }
    let (g0, cg) = reduce(g);
    let (h0, ch) = reduce(h);
    let limit = g0.order().max(h0.order()) + budget.max_extra_vertices;
    let mut sides = [Side::new(g0), Side::new(h0)];
    let meet = if sides[0].nodes[0].graph.order() == sides[1].nodes[0].graph.order()
        && sides[0].seen.contains_key(&certificate(&sides[1].nodes[0].graph))
    {
        Some((0, 0))
    } else {
        bfs(&mut sides, limit, budget)
    };
    let explored = sides[0].nodes.len() + sides[1].nodes.len();
    let Some((a, b)) = meet else {
        return Verdict::Unknown { explored };
    };
    build_certificate(g, cg, &sides, a, b, h, ch).map_or(Verdict::Unknown { explored }, Verdict::Equivalent)
}

fn bfs(sides: &mut [Side; 2], limit: usize, budget: &Budget) -> Option<(usize, usize)> {
    loop {
        let total = sides[0].nodes.len() + sides[1].nodes.len();
        if total >= budget.max_states {
            return None;
        }
        let s = match (sides[0].frontier.is_empty(), sides[1].frontier.is_empty()) {
            (true, true) => return None,
            (false, true) => 0,
            (true, false) => 1,
            _ => usize::from(sides[1].frontier.len() < sides[0].frontier.len()),
        };
        let frontier = std::mem::take(&mut sides[s].frontier);
        let mut next = Vec::new();
        for i in frontier {
            let graph = sides[s].nodes[i].graph.clone();
            for mv in legal_moves(&graph, limit, budget.edge_moves) {
                let child = apply_unchecked(&graph, &mv).expect("legal move applies");
                let key = certificate(&child);
                if sides[s].seen.contains_key(&key) {
                    continue;
                }
                let idx = sides[s].nodes.len();
                let other = sides[1 - s].seen.get(&key).copied();
                sides[s].seen.insert(key, idx);
                sides[s].nodes.push(Node {
                    graph: child,
                    parent: i,
                    mv: Some(mv),
                });
                if let Some(o) = other {
                    return Some(if s == 0 { (idx, o) } else { (o, idx) });
                }
                next.push(idx);
                if sides[0].nodes.len() + sides[1].nodes.len() >= budget.max_states {
                    return None;
                }
            }
        }
        sides[s].frontier = next;
    }
}

fn build_certificate(
    g: &SimpleGraph,
    cg: HomotopyCertificate,
    sides: &[Side; 2],
    a: usize,
    b: usize,
    h: &SimpleGraph,
    ch: HomotopyCertificate,
) -> Result<HomotopyCertificate> {
    let mut moves = cg.moves;
    moves.extend(sides[0].path(a).into_iter().map(|(_, m)| m));
    let mut cur = sides[0].nodes[a].graph.clone();
    let far = &sides[1].nodes[b].graph;
    let mut map: HashMap<u32, u32> = isomorphism(far, &cur)
        .expect("meeting graphs are isomorphic")
        .into_iter()
        .collect();
    // Steps from h: its reduction followed by the search path on that side.
    let mut steps = Vec::new();
    let mut g_h = h.clone();
    for mv in &ch.moves {
        let next = apply_unchecked(&g_h, mv)?;
        steps.push((g_h, mv.clone()));
        g_h = next;
    }
    steps.extend(sides[1].path(b));
    replay_reversed(&mut cur, &mut moves, &steps, &mut map)?;
    Ok(HomotopyCertificate {
        start: g.clone(),
        moves,
        marked: None,
    })
}

/// Outcome of asking whether a subgraph can be collapsed to a point inside
/// its host.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InHostVerdict {
    /// Removal sequence in the host after which one vertex of the subgraph survives.
    Yes(Vec<u32>),
    No,
    Unknown { explored: usize },
}

/// Decides whether the vertex set `sub` collapses to a single vertex under
/// some sequence of vertex removals of `host`. Removal-only deformations are
/// searched exhaustively up to `budget.max_states` host subsets.
pub fn contractible_in(sub: &[u32], host: &SimpleGraph, budget: &Budget) -> Result<InHostVerdict> {
    let h = host.mask_of(sub)?;
    if h == 0 {
        return Ok(InHostVerdict::No);
    }
    let mut col = Collapser::new(host);
    if col.contractible(h) {
        let seq = col.removal_order(h).unwrap();
        return Ok(InHostVerdict::Yes(seq.into_iter().map(|i| host.label(i)).collect()));
    }
    let mut seen: HashMap<u64, ()> = HashMap::new();
    let mut stack = vec![(host.full_mask(), Vec::<usize>::new())];
    seen.insert(host.full_mask(), ());
    while let Some((m, path)) = stack.pop() {
        if popcount(m & h) == 1 {
            return Ok(InHostVerdict::Yes(path.into_iter().map(|i| host.label(i)).collect()));
        }
        for x in Bits(col.removable(m)) {
            let next = m & !bit(x);
            if next & h == 0 || seen.contains_key(&next) {
                continue;
            }
            if seen.len() >= budget.max_states {
                return Ok(InHostVerdict::Unknown { explored: seen.len() });
            }
            seen.insert(next, ());
            let mut p = path.clone();
            p.push(x);
            stack.push((next, p));
        }
    }
    Ok(InHostVerdict::No)
}
