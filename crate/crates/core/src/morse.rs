//! Injective vertex functions, Poincaré-Hopf indices, critical points and the
//! minimal number of critical points over all orderings.
//!
//! For an ordering `f`, the sublevel graph `G_f(x)` is generated by the
//! vertices below `x` and the lower sphere `S⁻(x)` is the part of the unit
//! sphere of `x` inside it. A vertex is regular when `S⁻(x)` is contractible
//! and critical otherwise (in particular a local minimum, where it is empty).
//! The index is `1 - χ(S⁻(x))`.

use std::collections::{BTreeMap, HashMap};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::bits::{bit, compress, popcount, Bits};
use crate::category::{CategoryBracket, CategoryEvaluator};
use crate::cohomology::betti_mask;
use crate::complex::euler_mask;
use crate::error::{Error, Result};
use crate::graph::SimpleGraph;
use crate::homotopy::Collapser;

pub const DEFAULT_DP_LIMIT: usize = 22;
/// Hard ceiling for the subset DP regardless of configuration (2^26 bytes).
pub const MAX_DP_LIMIT: usize = 26;

/// An injective function on the vertices, stored as the vertices in
/// increasing order of value.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrderingFunction {
    order: Vec<u32>,
}

impl OrderingFunction {
    /// Validates that `order` lists every vertex of `g` exactly once.
    pub fn from_order(g: &SimpleGraph, order: Vec<u32>) -> Result<Self> {
        if order.len() != g.order() {
            return Err(Error::InvalidOrdering(format!(
                "{} values for {} vertices",
                order.len(),
                g.order()
            )));
        }
        let mut seen = 0u64;
        for &v in &order {
            let i = g.try_index(v)?;
            if seen >> i & 1 == 1 {
                return Err(Error::InvalidOrdering(format!("vertex {v} listed twice")));
            }
            seen |= bit(i);
        }
        Ok(Self { order })
    }

    /// Orders vertices by the given values; ties are rejected.
    pub fn from_values(g: &SimpleGraph, values: &BTreeMap<u32, f64>) -> Result<Self> {
        let mut pairs: Vec<(f64, u32)> = values.iter().map(|(&v, &x)| (x, v)).collect();
        if pairs.iter().any(|p| !p.0.is_finite()) {
            return Err(Error::InvalidOrdering("non-finite value".into()));
        }
        pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        if let Some(w) = pairs.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidOrdering(format!(
                "vertices {} and {} share the value {}",
                w[0].1, w[1].1, w[0].0
            )));
        }
        Self::from_order(g, pairs.into_iter().map(|p| p.1).collect())
    }

    /// Parses a JSON object mapping vertex labels to numbers.
    pub fn from_json(g: &SimpleGraph, v: &Value) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::InvalidOrdering("expected an object".into()))?;
        let mut values = BTreeMap::new();
        for (k, x) in obj {
            let label: u32 = k
                .parse()
                .map_err(|_| Error::InvalidOrdering(format!("bad vertex `{k}`")))?;
            let x = x
                .as_f64()
                .ok_or_else(|| Error::InvalidOrdering(format!("value of {k} is not a number")))?;
            values.insert(label, x);
        }
        Self::from_values(g, &values)
    }

    /// Vertex to rank (1-based) map, the JSON form written by the library.
    pub fn to_json(&self) -> Value {
        let map: serde_json::Map<String, Value> = self
            .order
            .iter()
            .enumerate()
            .map(|(r, v)| (v.to_string(), Value::from(r + 1)))
            .collect();
        Value::Object(map)
    }

    /// Vertices sorted by ascending label.
    pub fn by_label(g: &SimpleGraph) -> Self {
        Self {
            order: g.labels().to_vec(),
        }
    }

    pub fn order(&self) -> &[u32] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn reversed(&self) -> Self {
        let mut order = self.order.clone();
        order.reverse();
        Self { order }
    }

    /// Vertex indices of `g` in increasing order of value.
    pub fn indices(&self, g: &SimpleGraph) -> Vec<usize> {
        self.order.iter().map(|&v| g.index_of(v).unwrap()).collect()
    }
}

impl Serialize for OrderingFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

/// Per-vertex data for one ordering.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexIndexReport {
    pub vertex: u32,
    pub minus_sphere: Vec<u32>,
    pub euler_minus: i64,
    pub index: i64,
    pub critical: bool,
    /// `b(G_f(x) ∪ {x}) - b(G_f(x))`, componentwise.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub betti_change: Vec<i64>,
}

/// Index data for every vertex, in the order of `f`.
pub fn index_profile(g: &SimpleGraph, f: &OrderingFunction, with_betti: bool) -> Vec<VertexIndexReport> {
    let adj = g.adjacency();
    let mut col = Collapser::new(g);
    let mut below = 0u64;
    let mut out = Vec::with_capacity(g.order());
    let mut prev_betti: Vec<usize> = Vec::new();
    for i in f.indices(g) {
        let minus = adj[i] & below;
        let chi = euler_mask(adj, minus);
        let critical = !col.contractible(minus);
        let betti_change = if with_betti {
            let b = betti_mask(adj, below | bit(i));
            let n = b.len().max(prev_betti.len());
            let d = (0..n)
                .map(|k| *b.get(k).unwrap_or(&0) as i64 - *prev_betti.get(k).unwrap_or(&0) as i64)
                .collect();
            prev_betti = b;
            d
        } else {
            Vec::new()
        };
        out.push(VertexIndexReport {
            vertex: g.label(i),
            minus_sphere: g.labels_of(minus),
            euler_minus: chi,
            index: 1 - chi,
            critical,
            betti_change,
        });
        below |= bit(i);
    }
    out
}

pub fn critical_points(g: &SimpleGraph, f: &OrderingFunction) -> Vec<u32> {
    index_profile(g, f, false)
        .into_iter()
        .filter(|r| r.critical)
        .map(|r| r.vertex)
        .collect()
}

/// Number of critical points of `f`.
pub fn count_critical(g: &SimpleGraph, f: &OrderingFunction) -> usize {
    critical_points(g, f).len()
}

/// Lazily filled table: is a given subset of `N(x)` contractible?
struct SphereTable {
    nbhd: Vec<u64>,
    dense: Vec<Vec<u8>>,
    sparse: Vec<HashMap<u64, bool>>,
    col: Collapser,
}

impl SphereTable {
    const DENSE_DEGREE: usize = 22;

    fn new(g: &SimpleGraph) -> Self {
        let nbhd = g.adjacency().to_vec();
        let dense = nbhd
            .iter()
            .map(|&m| {
                if popcount(m) <= Self::DENSE_DEGREE {
                    vec![0u8; 1 << popcount(m)]
                } else {
                    Vec::new()
                }
            })
            .collect();
        Self {
            sparse: vec![HashMap::new(); nbhd.len()],
            nbhd,
            dense,
            col: Collapser::new(g),
        }
    }

    /// Cost 1 if adding `x` on top of the set `rest` creates a critical point.
    fn cost(&mut self, x: usize, rest: u64) -> u8 {
        let s = self.nbhd[x] & rest;
        if s == 0 {
            return 1;
        }
        if self.dense[x].is_empty() {
            if let Some(&c) = self.sparse[x].get(&s) {
                return u8::from(!c);
            }
            let c = self.col.contractible(s);
            self.sparse[x].insert(s, c);
            return u8::from(!c);
        }
        let k = compress(s, self.nbhd[x]) as usize;
        match self.dense[x][k] {
            1 => 0,
            2 => 1,
            _ => {
                let c = self.col.contractible(s);
                self.dense[x][k] = if c { 1 } else { 2 };
                u8::from(!c)
            }
        }
    }
}

/// Minimal number of critical points over all orderings, with an optimal
/// ordering as witness. Exact subset dynamic programming: the best value on a
/// vertex set `S` is the minimum over its top vertex `x` of the best value on
/// `S \ x` plus one if `x` is critical on top of `S \ x`.
pub fn crit_exact(g: &SimpleGraph, dp_limit: usize) -> Result<(usize, OrderingFunction)> {
    let n = g.order();
    let limit = dp_limit.min(MAX_DP_LIMIT);
    if n > limit {
        return Err(Error::OverLimit {
            what: "critical point dynamic programme",
            size: n,
            limit,
        });
    }
    if n == 0 {
        return Ok((0, OrderingFunction { order: Vec::new() }));
    }
    let mut table = SphereTable::new(g);
    let full = g.full_mask();
    let mut dp = vec![0u8; 1usize << n];
    for s in 1..=full {
        let mut best = u8::MAX;
        for x in Bits(s) {
            let rest = s & !bit(x);
            let c = dp[rest as usize] + table.cost(x, rest);
            if c < best {
                best = c;
            }
        }
        dp[s as usize] = best;
    }
    // Walk back from the full set, taking the smallest label achieving the optimum.
    let mut order = Vec::with_capacity(n);
    let mut s = full;
    while s != 0 {
        let x = Bits(s)
            .find(|&x| {
                let rest = s & !bit(x);
                dp[rest as usize] + table.cost(x, rest) == dp[s as usize]
            })
            .unwrap();
        order.push(g.label(x));
        s &= !bit(x);
    }
    order.reverse();
    Ok((dp[full as usize] as usize, OrderingFunction { order }))
}

/// Upper bound on the minimal number of critical points from randomised
/// greedy orderings: each step adds a vertex that is regular on top of the
/// current set when one exists.
pub fn crit_upper(g: &SimpleGraph, restarts: usize, seed: u64) -> (usize, OrderingFunction) {
    let n = g.order();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut table = SphereTable::new(g);
    let mut best: Option<(usize, Vec<usize>)> = None;
    for _ in 0..restarts.max(1) {
        let mut below = 0u64;
        let mut order = Vec::with_capacity(n);
        let mut crit = 0;
        let mut remaining: Vec<usize> = (0..n).collect();
        while !remaining.is_empty() {
            remaining.shuffle(&mut rng);
            let pos = remaining
                .iter()
                .position(|&x| table.cost(x, below) == 0)
                .unwrap_or(0);
            let x = remaining.swap_remove(pos);
            crit += table.cost(x, below) as usize;
            below |= bit(x);
            order.push(x);
        }
        if best.as_ref().map_or(true, |b| crit < b.0) {
            best = Some((crit, order));
        }
    }
    let (c, order) = best.unwrap();
    (
        c,
        OrderingFunction {
            order: order.into_iter().map(|i| g.label(i)).collect(),
        },
    )
}

/// Result of checking whether an ordering is a Morse function.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorseReport {
    pub is_morse: bool,
    /// Vertices violating the Morse condition, with the reason.
    pub failures: Vec<(u32, String)>,
    /// `c_k`: critical points of Morse index `k`.
    pub counts: Vec<usize>,
    pub betti: Vec<usize>,
    pub weak_inequalities: bool,
    pub strong_inequalities: bool,
    pub euler_identity: bool,
}

/// Checks the Morse condition: at each critical point exactly one Betti
/// number changes, by one, and the index equals `(-1)^m` where `m` is that
/// degree. Then evaluates the weak and strong Morse inequalities.
pub fn morse_check(g: &SimpleGraph, f: &OrderingFunction) -> MorseReport {
    let profile = index_profile(g, f, true);
    let mut failures = Vec::new();
    let mut counts: Vec<usize> = Vec::new();
    for r in &profile {
        let changed: Vec<(usize, i64)> = r
            .betti_change
            .iter()
            .enumerate()
            .filter(|(_, &d)| d != 0)
            .map(|(k, &d)| (k, d))
            .collect();
        if !r.critical {
            continue;
        }
        match changed.as_slice() {
            [(m, d)] if d.abs() == 1 => {
                let expect = if m % 2 == 0 { 1 } else { -1 };
                if r.index != expect {
                    failures.push((
                        r.vertex,
                        format!("index {} but degree {m} changes", r.index),
                    ));
                } else {
                    if counts.len() <= *m {
                        counts.resize(m + 1, 0);
                    }
                    counts[*m] += 1;
                }
            }
            _ => failures.push((
                r.vertex,
                format!("Betti change {:?} is not a single unit step", r.betti_change),
            )),
        }
    }
    let betti = crate::cohomology::trim_betti(&crate::cohomology::betti(g));
    let len = counts.len().max(betti.len());
    let c = |k: usize| *counts.get(k).unwrap_or(&0) as i64;
    let b = |k: usize| *betti.get(k).unwrap_or(&0) as i64;
    let weak = (0..len).all(|k| c(k) >= b(k));
    let mut strong = true;
    for k in 0..len {
        let s: i64 = (0..=k)
            .map(|j| if (k - j) % 2 == 0 { c(j) - b(j) } else { b(j) - c(j) })
            .sum();
        if s < 0 {
            strong = false;
        }
    }
    let euler = (0..len)
        .map(|k| if k % 2 == 0 { c(k) - b(k) } else { b(k) - c(k) })
        .sum::<i64>()
        == 0;
    MorseReport {
        is_morse: failures.is_empty(),
        failures,
        counts,
        betti,
        weak_inequalities: weak,
        strong_inequalities: strong,
        euler_identity: euler,
    }
}

/// Category index of each vertex for the ordering `f`: the change in the
/// category value when the vertex is added on top of its sublevel graph.
pub fn category_index_profile(
    g: &SimpleGraph,
    f: &OrderingFunction,
    eval: &dyn CategoryEvaluator,
) -> Vec<(u32, IndexBracket)> {
    let mut below = 0u64;
    let mut prev = CategoryBracket::exact(0, crate::category::BoundMethod::Trivial);
    let mut out = Vec::new();
    for i in f.indices(g) {
        below |= bit(i);
        let cur = eval.evaluate(&g.induced(below));
        out.push((g.label(i), IndexBracket::difference(&cur, &prev)));
        prev = cur;
    }
    out
}

/// Interval for a difference of two category brackets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexBracket {
    pub lower: i64,
    pub upper: i64,
}

impl IndexBracket {
    pub fn difference(a: &CategoryBracket, b: &CategoryBracket) -> Self {
        Self {
            lower: a.lower as i64 - b.upper as i64,
            upper: a.upper as i64 - b.lower as i64,
        }
    }

    pub fn exact(&self) -> Option<i64> {
        (self.lower == self.upper).then_some(self.lower)
    }
}
