//! Covers, exact geometric category of small graphs and certified brackets
//! for the category-type invariants.
//!
//! * `tcat`: fewest members of a cover whose members are contractible in
//!   themselves or inside the graph.
//! * `gcat`: fewest members of a cover by subgraphs contractible in themselves.
//! * `cat` and `Cat`: the minima of `tcat` and `gcat` over homotopic graphs.
//! * `cri`: the minimum of `crit` over homotopic graphs.
//!
//! Exact values are rarely computable, so each is reported as a
//! [`CategoryBracket`] whose bounds carry the method and evidence behind them.
//! Lower bounds come from the cup length (`cup ≤ cat ≤ tcat`) and from
//! non-contractibility (`tcat = 1` only for contractible graphs); upper bounds
//! from orderings (`tcat ≤ crit`) and verified covers.

use std::collections::HashMap;

use parking_lot::RwLock;
use serde::{Deserialize, Serialize};

use crate::bits::{bit, popcount, Bits};
use crate::canon::{certificate, Certificate};
use crate::cohomology::{CohomologyBasis, CupLength, DEFAULT_MAX_PRODUCTS};
use crate::error::{Error, Result};
use crate::graph::SimpleGraph;
use crate::homotopy::{
    apply_move, contractible_in, legal_moves, reduce, verify_certificate, Budget, Collapser,
    HomotopyCertificate, InHostVerdict,
};
use crate::morse::{crit_exact, crit_upper, OrderingFunction, DEFAULT_DP_LIMIT};

/// Where a bound comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundMethod {
    Trivial,
    Contractible,
    NotContractible,
    Cup,
    Crit,
    CritHeuristic,
    Gcat,
    CoverCertificate,
    Homotopy,
    Components,
    FixtureTable,
    Exhaustive,
}

/// Machine-checkable justification attached to a bound.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    Ordering { critical_points: usize, ordering: OrderingFunction },
    Cover { cover: Cover },
    CupProduct { factors: Vec<(usize, usize)> },
    Homotopy { certificate: HomotopyCertificate },
    Component { vertices: Vec<u32>, bracket: Box<CategoryBracket> },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CategoryBracket {
    pub lower: usize,
    pub upper: usize,
    pub lower_method: BoundMethod,
    pub upper_method: BoundMethod,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub evidence: Vec<Evidence>,
}

impl CategoryBracket {
    pub fn exact(v: usize, method: BoundMethod) -> Self {
        Self {
            lower: v,
            upper: v,
            lower_method: method,
            upper_method: method,
            evidence: Vec::new(),
        }
    }

    pub fn value(&self) -> Option<usize> {
        (self.lower == self.upper).then_some(self.lower)
    }

    pub fn is_exact(&self) -> bool {
        self.lower == self.upper
    }

    fn raise_lower(&mut self, v: usize, m: BoundMethod) {
        if v > self.lower {
            self.lower = v;
            self.lower_method = m;
        }
    }

    fn lower_upper(&mut self, v: usize, m: BoundMethod, ev: Option<Evidence>) -> bool {
        if v < self.upper {
            self.upper = v;
            self.upper_method = m;
            self.evidence.retain(|e| matches!(e, Evidence::CupProduct { .. }));
            self.evidence.extend(ev);
            true
        } else {
            false
        }
    }

    /// Sum of brackets of disjoint pieces.
    fn sum(parts: Vec<(Vec<u32>, CategoryBracket)>) -> Self {
        let mut out = CategoryBracket::exact(0, BoundMethod::Components);
        for (verts, b) in parts {
            out.lower += b.lower;
            out.upper += b.upper;
            out.evidence.push(Evidence::Component {
                vertices: verts,
                bracket: Box::new(b),
            });
        }
        out
    }
}

/// One cover member: a vertex set with either its induced edges or an
/// explicit edge subset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverMember {
    pub vertices: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<(u32, u32)>>,
}

impl CoverMember {
    pub fn induced(vertices: Vec<u32>) -> Self {
        Self {
            vertices,
            edges: None,
        }
    }

    /// The member as a graph, checked against the host.
    /// The subgraph made of exactly these edges and their endpoints.
    pub fn spanned(mut edges: Vec<(u32, u32)>) -> Self {
        let mut vertices: Vec<u32> = edges.iter().flat_map(|&(u, v)| [u, v]).collect();
        vertices.sort_unstable();
        vertices.dedup();
        edges.sort_unstable();
        Self {
            vertices,
            edges: Some(edges),
        }
    }

    pub fn graph(&self, host: &SimpleGraph) -> Result<SimpleGraph> {
        let mask = host.mask_of(&self.vertices)?;
        match &self.edges {
            None => Ok(host.induced(mask)),
            Some(edges) => {
                for &(u, v) in edges {
                    if !self.vertices.contains(&u) || !self.vertices.contains(&v) {
                        return Err(Error::InvalidCover(format!(
                            "edge {u}-{v} leaves its member"
                        )));
                    }
                    if !host.has_edge(u, v) {
                        return Err(Error::InvalidCover(format!("{u}-{v} is not an edge")));
                    }
                }
                SimpleGraph::from_edges(self.vertices.iter().copied(), edges.iter().copied())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Cover {
    pub members: Vec<CoverMember>,
}

impl Cover {
    pub fn induced(sets: Vec<Vec<u32>>) -> Self {
        Self {
            members: sets.into_iter().map(CoverMember::induced).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoverMode {
    /// Members must be contractible in themselves.
    InItself,
    /// Members may instead be contractible inside the host graph.
    InHost,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MemberStatus {
    ContractibleInItself,
    ContractibleInHost,
    NotContractible,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverVerification {
    /// All members verified and the cover is complete.
    pub valid: bool,
    pub uncovered_vertices: Vec<u32>,
    pub uncovered_edges: Vec<(u32, u32)>,
    pub members: Vec<MemberStatus>,
}

impl CoverVerification {
    pub fn covers(&self) -> bool {
        self.uncovered_vertices.is_empty() && self.uncovered_edges.is_empty()
    }

    pub fn inconclusive(&self) -> bool {
        self.members.contains(&MemberStatus::Unknown)
    }
}

/// Checks coverage of vertices and edges, then contractibility of every member.
pub fn verify_cover(g: &SimpleGraph, cover: &Cover, mode: CoverMode, budget: &Budget) -> Result<CoverVerification> {
    let mut vmask = 0u64;
    let mut covered_edges = std::collections::HashSet::new();
    let mut graphs = Vec::new();
    for m in &cover.members {
        let mg = m.graph(g)?;
        vmask |= g.mask_of(mg.labels())?;
        covered_edges.extend(mg.edges());
        graphs.push(mg);
    }
    let uncovered_vertices = g.labels_of(g.full_mask() & !vmask);
    let uncovered_edges: Vec<(u32, u32)> = g
        .edges()
        .into_iter()
        .filter(|e| !covered_edges.contains(e))
        .collect();
    let mut members = Vec::new();
    for (m, mg) in cover.members.iter().zip(&graphs) {
        let status = if Collapser::new(mg).contractible(mg.full_mask()) {
            MemberStatus::ContractibleInItself
        } else if mode == CoverMode::InItself {
            MemberStatus::NotContractible
        } else {
            match contractible_in(&m.vertices, g, budget)? {
                InHostVerdict::Yes(_) => MemberStatus::ContractibleInHost,
                InHostVerdict::No => MemberStatus::NotContractible,
                InHostVerdict::Unknown { .. } => MemberStatus::Unknown,
            }
        };
        members.push(status);
    }
    let valid = uncovered_vertices.is_empty()
        && uncovered_edges.is_empty()
        && members.iter().all(|s| {
            matches!(
                s,
                MemberStatus::ContractibleInItself | MemberStatus::ContractibleInHost
            )
        });
    Ok(CoverVerification {
        valid,
        uncovered_vertices,
        uncovered_edges,
        members,
    })
}

/// Largest edge count for which gcat is computed exactly.
pub const DEFAULT_GCAT_EDGE_LIMIT: usize = 18;
/// Largest order for the induced-cover upper bound.
pub const DEFAULT_INDUCED_LIMIT: usize = 20;

/// Maximal vertex subsets (by inclusion) generating contractible subgraphs.
pub fn maximal_contractible_sets(g: &SimpleGraph) -> Vec<u64> {
    let mut col = Collapser::new(g);
    let full = g.full_mask();
    let all: Vec<u64> = crate::bits::submasks(full)
        .filter(|&m| m != 0 && col.contractible(m))
        .collect();
    maximal(all)
}

fn maximal(mut all: Vec<u64>) -> Vec<u64> {
    all.sort_by_key(|&m| (std::cmp::Reverse(popcount(m)), m));
    let mut kept: Vec<u64> = Vec::new();
    for m in all {
        if !kept.iter().any(|&k| k & m == m) {
            kept.push(m);
        }
    }
    kept
}

/// Smallest cover by induced subgraphs contractible in themselves. Since
/// members may be arbitrary subgraphs, this bounds gcat from above only.
pub fn induced_cover(g: &SimpleGraph, vertex_limit: usize) -> Result<Cover> {
    let n = g.order();
    if n > vertex_limit {
        return Err(Error::OverLimit {
            what: "induced cover search",
            size: n,
            limit: vertex_limit,
        });
    }
    let edges = g.edge_indices();
    if n + edges.len() > 128 {
        return Err(Error::OverLimit {
            what: "cover universe (vertices + edges)",
            size: n + edges.len(),
            limit: 128,
        });
    }
    let sets = maximal_contractible_sets(g);
    let covers: Vec<u128> = sets
        .iter()
        .map(|&m| {
            let mut u = m as u128;
            for (k, &(i, j)) in edges.iter().enumerate() {
                if m >> i & 1 == 1 && m >> j & 1 == 1 {
                    u |= 1u128 << (n + k);
                }
            }
            u
        })
        .collect();
    let pick = min_cover(&covers, universe(n + edges.len()), 1);
    Ok(Cover::induced(pick.iter().map(|&c| g.labels_of(sets[c])).collect()))
}

/// Exact geometric category: the fewest subgraphs contractible in themselves
/// (not necessarily induced) covering every vertex and edge. Each connected
/// component is handled separately by enumerating all of its edge subsets,
/// so every component must have at most `edge_limit` edges.
pub fn gcat_exact(g: &SimpleGraph, edge_limit: usize) -> Result<Cover> {
    let mut members = Vec::new();
    for c in g.components() {
        let h = g.induced(c);
        let edges = h.edge_indices();
        if edges.is_empty() {
            members.push(CoverMember::induced(h.labels().to_vec()));
            continue;
        }
        let m = edges.len();
        if m > edge_limit {
            return Err(Error::OverLimit {
                what: "geometric category edge enumeration",
                size: m,
                limit: edge_limit,
            });
        }
        let mut found = Vec::new();
        let mut adj = vec![0u64; h.order()];
        for sel in 1u64..1 << m {
            adj.iter_mut().for_each(|a| *a = 0);
            let mut vm = 0u64;
            for k in Bits(sel) {
                let (i, j) = edges[k];
                adj[i] |= bit(j);
                adj[j] |= bit(i);
                vm |= bit(i) | bit(j);
            }
            if crate::graph::is_connected_mask(&adj, vm)
                && crate::complex::euler_mask(&adj, vm) == 1
                && Collapser::from_adjacency(adj.clone()).contractible(vm)
            {
                found.push(sel);
            }
        }
        let sets = maximal(found);
        let covers: Vec<u128> = sets.iter().map(|&s| s as u128).collect();
        for k in min_cover(&covers, universe(m), 1) {
            let es: Vec<(u32, u32)> = Bits(sets[k])
                .map(|e| (h.label(edges[e].0), h.label(edges[e].1)))
                .collect();
            let mut vs: Vec<u32> = es.iter().flat_map(|&(u, v)| [u, v]).collect();
            vs.sort_unstable();
            vs.dedup();
            let induced = h.induced(h.mask_of(&vs)?).size() == es.len();
            members.push(CoverMember {
                vertices: vs,
                edges: (!induced).then_some(es),
            });
        }
    }
    Ok(Cover { members })
}

fn universe(size: usize) -> u128 {
    if size >= 128 {
        u128::MAX
    } else {
        (1u128 << size) - 1
    }
}

/// Minimum set cover of `universe`, stopping early at `target` sets.
fn min_cover(covers: &[u128], universe: u128, target: usize) -> Vec<usize> {
    let size = 128 - universe.leading_zeros() as usize;
    let mut by_elem: Vec<Vec<usize>> = vec![Vec::new(); size];
    for (c, &u) in covers.iter().enumerate() {
        let mut x = u & universe;
        while x != 0 {
            let e = x.trailing_zeros() as usize;
            by_elem[e].push(c);
            x &= x - 1;
        }
    }
    let mut bb = SetCover {
        covers,
        by_elem: &by_elem,
        best: usize::MAX,
        best_pick: Vec::new(),
        target,
    };
    bb.search(universe, &mut Vec::new());
    bb.best_pick
}

struct SetCover<'a> {
    covers: &'a [u128],
    by_elem: &'a [Vec<usize>],
    best: usize,
    best_pick: Vec<usize>,
    target: usize,
}

impl SetCover<'_> {
    fn done(&self) -> bool {
        self.best <= self.target
    }

    fn search(&mut self, uncovered: u128, pick: &mut Vec<usize>) {
        if uncovered == 0 {
            if pick.len() < self.best {
                self.best = pick.len();
                self.best_pick = pick.clone();
            }
            return;
        }
        let max_gain = self
            .covers
            .iter()
            .map(|c| (c & uncovered).count_ones())
            .max()
            .unwrap_or(0);
        if max_gain == 0 {
            return;
        }
        let need = uncovered.count_ones().div_ceil(max_gain) as usize;
        if pick.len() + need >= self.best {
            return;
        }
        // Branch on the uncovered element with the fewest candidate sets.
        let mut x = uncovered;
        let mut elem = 0;
        let mut fewest = usize::MAX;
        while x != 0 {
            let e = x.trailing_zeros() as usize;
            if self.by_elem[e].len() < fewest {
                fewest = self.by_elem[e].len();
                elem = e;
            }
            x &= x - 1;
        }
        let mut cands = self.by_elem[elem].clone();
        cands.sort_by_key(|&c| (std::cmp::Reverse((self.covers[c] & uncovered).count_ones()), c));
        for c in cands {
            pick.push(c);
            self.search(uncovered & !self.covers[c], pick);
            pick.pop();
            if self.done() {
                return;
            }
        }
    }
}

/// Knobs shared by the bracket computations.
#[derive(Clone, Debug)]
pub struct CategoryOptions {
    pub dp_limit: usize,
    pub gcat_edge_limit: usize,
    pub induced_limit: usize,
    pub max_products: usize,
    pub heuristic_restarts: usize,
    pub seed: u64,
    /// Budget for in-host contractibility checks of supplied covers.
    pub budget: Budget,
    /// Distinct homotopic graphs examined for cat, Cat and cri upper bounds.
    pub homotopy_states: usize,
    /// Extra covers to verify (e.g. fixture metadata).
    pub covers: Vec<Cover>,
    /// Certificates from the graph to homotopic graphs worth examining.
    pub certificates: Vec<HomotopyCertificate>,
}

impl Default for CategoryOptions {
    fn default() -> Self {
        Self {
            dp_limit: DEFAULT_DP_LIMIT,
            gcat_edge_limit: DEFAULT_GCAT_EDGE_LIMIT,
            induced_limit: DEFAULT_INDUCED_LIMIT,
            max_products: DEFAULT_MAX_PRODUCTS,
            heuristic_restarts: 64,
            seed: 0,
            budget: Budget::default(),
            homotopy_states: 64,
            covers: Vec::new(),
            certificates: Vec::new(),
        }
    }
}

fn cup_bracket(g: &SimpleGraph, opts: &CategoryOptions) -> CupLength {
    CohomologyBasis::new(g).cup_length(opts.max_products)
}

fn component_split(
    g: &SimpleGraph,
    f: impl Fn(&SimpleGraph) -> CategoryBracket,
) -> Option<CategoryBracket> {
    let comps = g.components();
    if comps.len() <= 1 {
        return None;
    }
    Some(CategoryBracket::sum(
        comps
            .into_iter()
            .map(|c| {
                let h = g.induced(c);
                (h.labels().to_vec(), f(&h))
            })
            .collect(),
    ))
}

/// Lower bound shared by every invariant here: the cup length, raised to 2
/// for non-contractible graphs when `strict` (only valid for tcat and gcat).
fn base_bracket(g: &SimpleGraph, opts: &CategoryOptions, strict: bool) -> std::result::Result<CategoryBracket, CategoryBracket> {
    if g.order() == 0 {
        return Err(CategoryBracket::exact(0, BoundMethod::Trivial));
    }
    if Collapser::new(g).contractible(g.full_mask()) {
        let mut b = CategoryBracket::exact(1, BoundMethod::Contractible);
        b.evidence.push(Evidence::Cover {
            cover: Cover::induced(vec![g.labels().to_vec()]),
        });
        return Err(b);
    }
    let cup = cup_bracket(g, opts);
    let mut b = CategoryBracket {
        lower: 1,
        upper: usize::MAX,
        lower_method: BoundMethod::Trivial,
        upper_method: BoundMethod::Trivial,
        evidence: Vec::new(),
    };
    if strict {
        b.raise_lower(2, BoundMethod::NotContractible);
    }
    if cup.lower > b.lower {
        b.raise_lower(cup.lower, BoundMethod::Cup);
        b.evidence.push(Evidence::CupProduct {
            factors: cup.witness,
        });
    }
    Ok(b)
}

fn crit_bound(g: &SimpleGraph, opts: &CategoryOptions) -> (usize, BoundMethod, OrderingFunction) {
    match crit_exact(g, opts.dp_limit) {
        Ok((c, f)) => (c, BoundMethod::Crit, f),
        Err(_) => {
            let (c, f) = crit_upper(g, opts.heuristic_restarts, opts.seed);
            (c, BoundMethod::CritHeuristic, f)
        }
    }
}

/// Bracket for the topological category.
pub fn tcat_bracket(g: &SimpleGraph, opts: &CategoryOptions) -> CategoryBracket {
    if let Some(b) = component_split(g, |h| {
        let mut o = opts.clone();
        o.covers.clear();
        tcat_bracket(h, &o)
    }) {
        return b;
    }
    let mut b = match base_bracket(g, opts, true) {
        Ok(b) => b,
        Err(b) => return b,
    };
    let (c, m, f) = crit_bound(g, opts);
    b.lower_upper(c, m, Some(Evidence::Ordering { critical_points: c, ordering: f }));
    for cover in &opts.covers {
        if cover.len() >= b.upper {
            continue;
        }
        if let Ok(v) = verify_cover(g, cover, CoverMode::InHost, &opts.budget) {
            if v.valid {
                b.lower_upper(
                    cover.len(),
                    BoundMethod::CoverCertificate,
                    Some(Evidence::Cover { cover: cover.clone() }),
                );
            }
        }
    }
    if b.upper > b.lower {
        if let Some(cover) = self_contractible_cover(g, opts) {
            b.lower_upper(cover.len(), BoundMethod::Gcat, Some(Evidence::Cover { cover }));
        }
    }
    b
}

/// Exact gcat cover when small enough, else the best induced cover.
fn self_contractible_cover(g: &SimpleGraph, opts: &CategoryOptions) -> Option<Cover> {
    gcat_exact(g, opts.gcat_edge_limit)
        .or_else(|_| induced_cover(g, opts.induced_limit))
        .ok()
}

/// Bracket for the geometric category (covers contractible in themselves).
pub fn gcat_bracket(g: &SimpleGraph, opts: &CategoryOptions) -> CategoryBracket {
    if let Some(b) = component_split(g, |h| {
        let mut o = opts.clone();
        o.covers.clear();
        gcat_bracket(h, &o)
    }) {
        return b;
    }
    let mut b = match base_bracket(g, opts, true) {
        Ok(b) => b,
        Err(b) => return b,
    };
    if let Ok(cover) = gcat_exact(g, opts.gcat_edge_limit) {
        b.lower = cover.len();
        b.lower_method = BoundMethod::Exhaustive;
        b.lower_upper(cover.len(), BoundMethod::Gcat, Some(Evidence::Cover { cover }));
        return b;
    }
    if let Ok(cover) = induced_cover(g, opts.induced_limit) {
        b.lower_upper(cover.len(), BoundMethod::Gcat, Some(Evidence::Cover { cover }));
    }
    for cover in &opts.covers {
        if let Ok(v) = verify_cover(g, cover, CoverMode::InItself, &opts.budget) {
            if v.valid {
                b.lower_upper(
                    cover.len(),
                    BoundMethod::CoverCertificate,
                    Some(Evidence::Cover { cover: cover.clone() }),
                );
            }
        }
    }
    if b.upper == usize::MAX {
        // Singletons plus edges always form a cover by contractible pieces.
        let mut sets: Vec<Vec<u32>> = g.edges().into_iter().map(|(u, v)| vec![u, v]).collect();
        for &l in g.labels() {
            if g.neighbors(l).map_or(true, |n| n.is_empty()) {
                sets.push(vec![l]);
            }
        }
        let len = sets.len();
        b.lower_upper(len, BoundMethod::Trivial, Some(Evidence::Cover { cover: Cover::induced(sets) }));
    }
    b
}

/// Graphs homotopic to `g` reachable by a short breadth-first exploration
/// from its reduction, each with a certificate from `g`.
pub fn homotopic_samples(g: &SimpleGraph, opts: &CategoryOptions) -> Vec<(SimpleGraph, HomotopyCertificate)> {
    let (core, cert) = reduce(g);
    let mut out = vec![(core.clone(), cert.clone())];
    let mut seen: HashMap<Certificate, ()> = HashMap::new();
    seen.insert(certificate(&core), ());
    seen.insert(certificate(g), ());
    let limit = g.order().max(core.order()) + opts.budget.max_extra_vertices;
    let mut frontier = vec![(core, cert)];
    while !frontier.is_empty() && out.len() < opts.homotopy_states {
        let mut next = Vec::new();
        for (h, c) in frontier {
            for mv in legal_moves(&h, limit, opts.budget.edge_moves) {
                let Ok(child) = apply_move(&h, &mv) else { continue };
                if seen.insert(certificate(&child), ()).is_some() {
                    continue;
                }
                let mut cc = c.clone();
                cc.moves.push(mv);
                next.push((child.clone(), cc.clone()));
                out.push((child, cc));
                if out.len() >= opts.homotopy_states {
                    return out;
                }
            }
        }
        frontier = next;
    }
    out
}

fn user_samples(opts: &CategoryOptions) -> Vec<(SimpleGraph, HomotopyCertificate)> {
    opts.certificates
        .iter()
        .filter_map(|c| verify_certificate(c).ok().map(|o| (o.end, c.clone())))
        .collect()
}

fn homotopy_minimum(
    g: &SimpleGraph,
    opts: &CategoryOptions,
    own: CategoryBracket,
    inner: impl Fn(&SimpleGraph, &CategoryOptions) -> CategoryBracket,
) -> CategoryBracket {
    let mut b = match base_bracket(g, opts, false) {
        Ok(b) => b,
        Err(b) => return b,
    };
    b.lower_upper(own.upper, own.upper_method, own.evidence.into_iter().find(|e| !matches!(e, Evidence::CupProduct { .. })));
    let mut inner_opts = opts.clone();
    inner_opts.covers.clear();
    inner_opts.certificates.clear();
    for (h, cert) in user_samples(opts).into_iter().chain(homotopic_samples(g, opts)) {
        if b.upper <= b.lower {
            break;
        }
        let hb = inner(&h, &inner_opts);
        if hb.upper < b.upper {
            b.lower_upper(hb.upper, BoundMethod::Homotopy, Some(Evidence::Homotopy { certificate: cert }));
            b.evidence.extend(hb.evidence.into_iter().filter(|e| !matches!(e, Evidence::CupProduct { .. })));
        }
    }
    b
}

/// Bracket for the homotopy-invariant category: cup length below, and the
/// smallest tcat upper bound over examined homotopic graphs above.
pub fn cat_bracket(g: &SimpleGraph, opts: &CategoryOptions) -> CategoryBracket {
    if let Some(b) = component_split(g, |h| {
        let mut o = opts.clone();
        o.covers.clear();
        o.certificates.clear();
        cat_bracket(h, &o)
    }) {
        return b;
    }
    homotopy_minimum(g, opts, tcat_bracket(g, opts), tcat_bracket)
}

/// Bracket for the strong category: minimum of gcat over homotopic graphs.
pub fn strong_cat_bracket(g: &SimpleGraph, opts: &CategoryOptions) -> CategoryBracket {
    if let Some(b) = component_split(g, |h| {
        let mut o = opts.clone();
        o.covers.clear();
        o.certificates.clear();
        strong_cat_bracket(h, &o)
    }) {
        return b;
    }
    homotopy_minimum(g, opts, gcat_bracket(g, opts), gcat_bracket)
}

/// Bracket for the minimal number of critical points over homotopic graphs.
pub fn cri_bracket(g: &SimpleGraph, opts: &CategoryOptions) -> CategoryBracket {
    let crit_as_bracket = |h: &SimpleGraph, o: &CategoryOptions| {
        let (c, m, f) = crit_bound(h, o);
        let mut b = CategoryBracket::exact(c, m);
        b.lower = 0;
        b.evidence.push(Evidence::Ordering { critical_points: c, ordering: f });
        b
    };
    if let Some(b) = component_split(g, |h| {
        let mut o = opts.clone();
        o.certificates.clear();
        cri_bracket(h, &o)
    }) {
        return b;
    }
    homotopy_minimum(g, opts, crit_as_bracket(g, opts), crit_as_bracket)
}

/// Best-effort rearrangement of a cover so that every member meets the
/// vertex set `h` either not at all or in all of `h`: the first member
/// meeting `h` absorbs it and the others drop its vertices. Returns `None`
/// when the result no longer verifies.
pub fn normalize_cover(g: &SimpleGraph, cover: &Cover, h: &[u32], mode: CoverMode, budget: &Budget) -> Result<Option<Cover>> {
    let hm = g.mask_of(h)?;
    let masks: Vec<u64> = cover
        .members
        .iter()
        .map(|m| g.mask_of(&m.vertices))
        .collect::<Result<_>>()?;
    let Some(k) = masks.iter().position(|&m| m & hm != 0) else {
        return Ok(None);
    };
    let members: Vec<Vec<u32>> = masks
        .iter()
        .enumerate()
        .map(|(j, &m)| g.labels_of(if j == k { m | hm } else { m & !hm }))
        .collect();
    if members.iter().any(|m| m.is_empty()) {
        return Ok(None);
    }
    let out = Cover::induced(members);
    Ok(verify_cover(g, &out, mode, budget)?.valid.then_some(out))
}

/// Computes a category value (or bracket) for arbitrary graphs; used by the
/// category index and category curvature.
pub trait CategoryEvaluator: Sync {
    fn evaluate(&self, g: &SimpleGraph) -> CategoryBracket;
    fn name(&self) -> &'static str;
}

/// Exact when every component is contractible (cat = number of components)
/// or reduces to a cycle of length at least 4 (contributing 2). Otherwise
/// reports the trivial bracket `[components, ∞)` for that component.
#[derive(Debug, Default)]
pub struct PieceEvaluator;

impl CategoryEvaluator for PieceEvaluator {
    fn evaluate(&self, g: &SimpleGraph) -> CategoryBracket {
        let mut out = CategoryBracket::exact(0, BoundMethod::Components);
        for c in g.components() {
            let h = g.induced(c);
            let (core, _) = reduce(&h);
            let is_cycle = core.order() >= 4
                && core.size() == core.order()
                && core.is_connected()
                && (0..core.order()).all(|i| core.degree(i) == 2);
            if core.order() == 1 {
                out.lower += 1;
                out.upper += 1;
            } else if is_cycle {
                out.lower += 2;
                out.upper += 2;
            } else {
                out.lower += 1;
                out.upper = usize::MAX / 2;
                out.upper_method = BoundMethod::Trivial;
            }
        }
        out
    }

    fn name(&self) -> &'static str {
        "pieces"
    }
}

/// `cup ≤ cat ≤ min(gcat, crit)` per component, with results memoised by
/// isomorphism class. With `topological` set it brackets tcat instead.
#[derive(Debug)]
pub struct BracketEvaluator {
    pub opts: CategoryOptions,
    pub topological: bool,
    cache: RwLock<HashMap<Certificate, (usize, usize)>>,
}

impl BracketEvaluator {
    pub fn new(opts: CategoryOptions, topological: bool) -> Self {
        Self {
            opts,
            topological,
            cache: RwLock::new(HashMap::new()),
        }
    }

    fn component(&self, h: &SimpleGraph) -> (usize, usize) {
        let key = certificate(h);
        if let Some(&v) = self.cache.read().get(&key) {
            return v;
        }
        let b = if self.topological {
            tcat_bracket(h, &self.opts)
        } else {
            let mut o = self.opts.clone();
            o.homotopy_states = o.homotopy_states.min(16);
            cat_bracket(h, &o)
        };
        let v = (b.lower, b.upper);
        self.cache.write().insert(key, v);
        v
    }
}

impl Default for BracketEvaluator {
    fn default() -> Self {
        Self::new(CategoryOptions::default(), false)
    }
}

impl CategoryEvaluator for BracketEvaluator {
    fn evaluate(&self, g: &SimpleGraph) -> CategoryBracket {
        let mut out = CategoryBracket::exact(0, BoundMethod::Components);
        for c in g.components() {
            let (l, u) = self.component(&g.induced(c));
            out.lower += l;
            out.upper += u;
        }
        if out.lower != out.upper {
            out.upper_method = BoundMethod::Crit;
            out.lower_method = BoundMethod::Cup;
        }
        out
    }

    fn name(&self) -> &'static str {
        if self.topological {
            "tcat-bracket"
        } else {
            "cat-bracket"
        }
    }
}

/// Looks graphs up by isomorphism class; unknown classes fall back to `inner`.
pub struct TableEvaluator<E: CategoryEvaluator> {
    table: HashMap<Certificate, usize>,
    inner: E,
}

impl<E: CategoryEvaluator> TableEvaluator<E> {
    pub fn new(entries: impl IntoIterator<Item = (SimpleGraph, usize)>, inner: E) -> Self {
        Self {
            table: entries.into_iter().map(|(g, v)| (certificate(&g), v)).collect(),
            inner,
        }
    }
}

impl<E: CategoryEvaluator> CategoryEvaluator for TableEvaluator<E> {
    fn evaluate(&self, g: &SimpleGraph) -> CategoryBracket {
        match self.table.get(&certificate(g)) {
            Some(&v) => CategoryBracket::exact(v, BoundMethod::FixtureTable),
            None => self.inner.evaluate(g),
        }
    }

    fn name(&self) -> &'static str {
        "table"
    }
}
