//! Elementary homotopy moves and replayable certificates.
//!
//! The four moves are: remove a vertex whose unit sphere is contractible, add
//! a new vertex joined to a contractible subgraph, and add or remove an edge
//! `uv` when the common neighbourhood `S(u) ∩ S(v)` is contractible.

use serde::{Deserialize, Serialize};

use crate::bits::bit;
use crate::error::{Error, Result};
use crate::graph::SimpleGraph;
use crate::homotopy::contract::Collapser;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "move", rename_all = "snake_case")]
pub enum Move {
    RemoveVertex { vertex: u32 },
    AddVertex { vertex: u32, over: Vec<u32> },
    AddEdge { u: u32, v: u32 },
    RemoveEdge { u: u32, v: u32 },
}

impl Move {
    /// The move undoing `self` when applied to the graph `before` produced by it.
    pub fn inverse(&self, before: &SimpleGraph) -> Result<Move> {
        Ok(match self {
            Move::RemoveVertex { vertex } => Move::AddVertex {
                vertex: *vertex,
                over: before.neighbors(*vertex)?,
            },
            Move::AddVertex { vertex, .. } => Move::RemoveVertex { vertex: *vertex },
            Move::AddEdge { u, v } => Move::RemoveEdge { u: *u, v: *v },
            Move::RemoveEdge { u, v } => Move::AddEdge { u: *u, v: *v },
        })
    }

    /// Rewrites every vertex label through `f`.
    pub fn map_labels(&self, f: impl Fn(u32) -> u32) -> Move {
        match self {
            Move::RemoveVertex { vertex } => Move::RemoveVertex { vertex: f(*vertex) },
            Move::AddVertex { vertex, over } => Move::AddVertex {
                vertex: f(*vertex),
                over: over.iter().map(|&w| f(w)).collect(),
            },
            Move::AddEdge { u, v } => Move::AddEdge { u: f(*u), v: f(*v) },
            Move::RemoveEdge { u, v } => Move::RemoveEdge { u: f(*u), v: f(*v) },
        }
    }
}

/// Checks that `mv` is legal on `g`; the error names the violated condition.
pub fn check_move(g: &SimpleGraph, mv: &Move) -> Result<()> {
    let illegal = |s: String| Err(Error::IllegalMove(s));
    match mv {
        Move::RemoveVertex { vertex } => {
            let i = g.try_index(*vertex)?;
            if !Collapser::new(g).contractible(g.adj(i)) {
                return illegal(format!("unit sphere of {vertex} is not contractible"));
            }
        }
        Move::AddVertex { vertex, over } => {
            if g.contains(*vertex) {
                return Err(Error::DuplicateVertex(*vertex));
            }
            let m = g.mask_of(over)?;
            if !Collapser::new(g).contractible(m) {
                return illegal(format!("attaching set of {vertex} is not contractible"));
            }
        }
        Move::AddEdge { u, v } | Move::RemoveEdge { u, v } => {
            let i = g.try_index(*u)?;
            let j = g.try_index(*v)?;
            if i == j {
                return Err(Error::SelfLoop(*u));
            }
            let present = g.adj(i) & bit(j) != 0;
            let adding = matches!(mv, Move::AddEdge { .. });
            if present == adding {
                return illegal(format!(
                    "edge {u}-{v} is {}",
                    if present { "already present" } else { "absent" }
                ));
            }
            if !Collapser::new(g).contractible(g.adj(i) & g.adj(j)) {
                return illegal(format!(
                    "common neighbourhood of {u} and {v} is not contractible"
                ));
            }
        }
    }
    Ok(())
}

/// Applies a move after checking its legality.
pub fn apply_move(g: &SimpleGraph, mv: &Move) -> Result<SimpleGraph> {
    check_move(g, mv)?;
    apply_unchecked(g, mv)
}

pub(crate) fn apply_unchecked(g: &SimpleGraph, mv: &Move) -> Result<SimpleGraph> {
    match mv {
        Move::RemoveVertex { vertex } => g.without_vertex(*vertex),
        Move::AddVertex { vertex, over } => g.with_vertex(*vertex, over),
        Move::AddEdge { u, v } => g.with_edge(*u, *v),
        Move::RemoveEdge { u, v } => g.without_edge(*u, *v),
    }
}

/// A start graph plus a move sequence. Optionally tracks a marked vertex set
/// through the moves: removals delete from it, and a new vertex joins it when
/// its attaching set meets the marked set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomotopyCertificate {
    pub start: SimpleGraph,
    pub moves: Vec<Move>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub marked: Option<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateOutcome {
    pub end: SimpleGraph,
    pub marked_end: Option<Vec<u32>>,
}

impl HomotopyCertificate {
    pub fn new(start: SimpleGraph) -> Self {
        Self {
            start,
            moves: Vec::new(),
            marked: None,
        }
    }
}

/// Replays a certificate, checking every move. Errors carry the failing step.
pub fn verify_certificate(cert: &HomotopyCertificate) -> Result<CertificateOutcome> {
    let mut g = cert.start.clone();
    let mut marked = cert.marked.clone();
    if let Some(m) = &marked {
        g.mask_of(m).map_err(|e| Error::Certificate {
            step: 0,
            reason: format!("marked set: {e}"),
        })?;
    }
    for (step, mv) in cert.moves.iter().enumerate() {
        let next = apply_move(&g, mv).map_err(|e| Error::Certificate {
            step,
            reason: e.to_string(),
        })?;
        if let Some(m) = marked.as_mut() {
            match mv {
                Move::RemoveVertex { vertex } => m.retain(|x| x != vertex),
                Move::AddVertex { vertex, over } => {
                    if over.iter().any(|w| m.contains(w)) {
                        m.push(*vertex);
                        m.sort_unstable();
                    }
                }
                _ => {}
            }
        }
        g = next;
    }
    Ok(CertificateOutcome {
        end: g,
        marked_end: marked,
    })
}
