//! Index-expectation curvatures.
//!
//! The curvature of a vertex is the expected value of an index over uniformly
//! random orderings. An index depends only on the set `S` of vertices below
//! `x`, and `S` has size `s` with probability `1/n` spread evenly over the
//! `C(n-1, s)` choices, so
//!
//! `E[index(x)] = Σ_{S ⊆ V∖x} s!(n-1-s)!/n! · index(x, S)`.
//!
//! For the Euler index only `S ∩ N(x)` matters, which shrinks the sum to the
//! `2^deg(x)` neighbour subsets with weights `|W|!(d-|W|)!/(d+1)!`.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use parking_lot::Mutex;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::bits::{bit, popcount, submasks};
use crate::category::CategoryEvaluator;
use crate::cohomology::betti_mask;
use crate::complex::euler_mask;
use crate::error::{Error, Result};
use crate::graph::SimpleGraph;
use crate::linalg::Q;

/// Largest degree handled by exact neighbour-subset enumeration by default.
pub const DEFAULT_DEGREE_CAP: usize = 16;
/// Largest order handled by exact enumeration of below-sets.
pub const EXACT_SUBSET_LIMIT: usize = 18;
pub const DEFAULT_SAMPLES: usize = 20_000;
/// Monte-Carlo radius is this many standard errors.
pub const CONFIDENCE_Z: f64 = 3.0;
const CHUNKS: u64 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Exact,
    MonteCarlo { samples: usize },
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "exact" {
            return Ok(Method::Exact);
        }
        s.strip_prefix("mc:")
            .and_then(|n| n.parse().ok())
            .filter(|&n: &usize| n > 0)
            .map(|samples| Method::MonteCarlo { samples })
            .ok_or_else(|| Error::Document(format!("unknown curvature method {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Quantity {
    Euler,
    Betti { k: usize },
    Category,
}

fn ser_q<S: Serializer>(q: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CurvatureValue {
    Exact {
        #[serde(serialize_with = "ser_q")]
        value: Q,
    },
    /// Exact expectation of an index known only up to an interval.
    Bracket {
        #[serde(serialize_with = "ser_q")]
        lower: Q,
        #[serde(serialize_with = "ser_q")]
        upper: Q,
    },
    MonteCarlo {
        mean: f64,
        radius: f64,
        samples: usize,
    },
    MonteCarloBracket {
        lower_mean: f64,
        upper_mean: f64,
        radius: f64,
        samples: usize,
    },
}

impl CurvatureValue {
    pub fn exact(&self) -> Option<&Q> {
        match self {
            CurvatureValue::Exact { value } => Some(value),
            CurvatureValue::Bracket { lower, upper } if lower == upper => Some(lower),
            _ => None,
        }
    }

    /// Interval guaranteed (exact modes) or estimated (sampling modes) to
    /// contain the curvature.
    pub fn interval(&self) -> (f64, f64) {
        let f = |q: &Q| q.to_f64().unwrap_or(f64::NAN);
        match self {
            CurvatureValue::Exact { value } => (f(value), f(value)),
            CurvatureValue::Bracket { lower, upper } => (f(lower), f(upper)),
            CurvatureValue::MonteCarlo { mean, radius, .. } => (mean - radius, mean + radius),
            CurvatureValue::MonteCarloBracket {
                lower_mean,
                upper_mean,
                radius,
                ..
            } => (lower_mean - radius, upper_mean + radius),
        }
    }

    pub fn contains(&self, q: &Q) -> bool {
        match self {
            CurvatureValue::Exact { value } => value == q,
            CurvatureValue::Bracket { lower, upper } => lower <= q && q <= upper,
            _ => {
                let (lo, hi) = self.interval();
                let x = q.to_f64().unwrap_or(f64::NAN);
                lo <= x && x <= hi
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurvatureReport {
    pub quantity: Quantity,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub values: BTreeMap<u32, CurvatureValue>,
    pub sum: CurvatureValue,
}

impl CurvatureReport {
    fn new(quantity: Quantity, seed: Option<u64>, values: BTreeMap<u32, CurvatureValue>) -> Self {
        let sum = sum_values(values.values());
        Self {
            quantity,
            seed,
            values,
            sum,
        }
    }

    pub fn value(&self, v: u32) -> Option<&CurvatureValue> {
        self.values.get(&v)
    }

    /// All per-vertex values exact.
    pub fn is_exact(&self) -> bool {
        self.values.values().all(|v| v.exact().is_some())
    }
}

fn sum_values<'a>(vals: impl Iterator<Item = &'a CurvatureValue>) -> CurvatureValue {
    let mut lo = Q::zero();
    let mut hi = Q::zero();
    let (mut mlo, mut mhi, mut var) = (0.0, 0.0, 0.0);
    let mut sampled = None;
    let mut bracket = false;
    for v in vals {
        match v {
            CurvatureValue::Exact { value } => {
                lo += value;
                hi += value;
            }
            CurvatureValue::Bracket { lower, upper } => {
                bracket = true;
                lo += lower;
                hi += upper;
            }
            CurvatureValue::MonteCarlo { mean, radius, samples } => {
                mlo += mean;
                mhi += mean;
                var += radius;
                sampled = Some((*samples, false));
            }
            CurvatureValue::MonteCarloBracket {
                lower_mean,
                upper_mean,
                radius,
                samples,
            } => {
                mlo += lower_mean;
                mhi += upper_mean;
                var += radius;
                sampled = Some((*samples, true));
            }
        }
    }
    match sampled {
        None if !bracket || lo == hi => CurvatureValue::Exact { value: lo },
        None => CurvatureValue::Bracket { lower: lo, upper: hi },
        Some((samples, br)) => {
            let f = |q: &Q| q.to_f64().unwrap_or(0.0);
            // Radii add: the per-vertex estimates share their samples.
            if br || bracket {
                CurvatureValue::MonteCarloBracket {
                    lower_mean: mlo + f(&lo),
                    upper_mean: mhi + f(&hi),
                    radius: var,
                    samples,
                }
            } else {
                CurvatureValue::MonteCarlo {
                    mean: mlo + f(&lo),
                    radius: var,
                    samples,
                }
            }
        }
    }
}

/// `s!(m-s)!/(m+1)!`: the probability that a given `s`-subset of `m` other
/// items is exactly the set preceding a fixed item in a random order.
pub fn below_weight(s: usize, m: usize) -> Q {
    let fact = |k: usize| (1..=k).fold(BigInt::from(1), |a, i| a * i);
    Q::new(fact(s) * fact(m - s), fact(m + 1))
}

fn weights(m: usize) -> Vec<Q> {
    (0..=m).map(|s| below_weight(s, m)).collect()
}

/// Exact Euler curvature; vertices above `degree_cap` fall back to sampling.
pub fn euler_curvature(g: &SimpleGraph) -> CurvatureReport {
    euler_curvature_with(g, DEFAULT_DEGREE_CAP, DEFAULT_SAMPLES, 0)
}

pub fn euler_curvature_with(g: &SimpleGraph, degree_cap: usize, samples: usize, seed: u64) -> CurvatureReport {
    let adj = g.adjacency();
    let exact: Vec<Option<Q>> = (0..g.order())
        .into_par_iter()
        .map(|i| {
            let d = g.degree(i);
            (d <= degree_cap).then(|| {
                let w = weights(d);
                submasks(adj[i])
                    .map(|s| &w[popcount(s)] * Q::from_integer(BigInt::from(1 - euler_mask(adj, s))))
                    .sum()
            })
        })
        .collect();
    let fallback = exact.iter().any(Option::is_none);
    let mc = fallback.then(|| euler_curvature_mc(g, samples, seed));
    let values = exact
        .into_iter()
        .enumerate()
        .map(|(i, e)| {
            let l = g.label(i);
            let v = match e {
                Some(value) => CurvatureValue::Exact { value },
                None => mc.as_ref().unwrap().values[&l].clone(),
            };
            (l, v)
        })
        .collect();
    CurvatureReport::new(Quantity::Euler, fallback.then_some(seed), values)
}

pub fn euler_curvature_mc(g: &SimpleGraph, samples: usize, seed: u64) -> CurvatureReport {
    let adj = g.adjacency();
    let stats = sample(g, samples, seed, |order| {
        let mut below = 0u64;
        order
            .iter()
            .map(|&i| {
                let x = (1 - euler_mask(adj, adj[i] & below)) as f64;
                below |= bit(i);
                (x, x)
            })
            .collect()
    });
    CurvatureReport::new(Quantity::Euler, Some(seed), stats.values(g, false))
}

/// Expected change of `b_k` when a vertex enters the filtration.
pub fn betti_curvature(g: &SimpleGraph, k: usize, method: Method, seed: u64) -> Result<CurvatureReport> {
    let adj = g.adjacency();
    let bk = |m: u64| *betti_mask(adj, m).get(k).unwrap_or(&0) as i64;
    match method {
        Method::Exact => {
            let table = subset_table(g, |m| {
                let b = bk(m);
                (b, b)
            })?;
            Ok(CurvatureReport::new(Quantity::Betti { k }, None, expectation(g, &table)))
        }
        Method::MonteCarlo { samples } => {
            let stats = sample(g, samples, seed, |order| {
                let mut below = 0u64;
                let mut prev = 0;
                order
                    .iter()
                    .map(|&i| {
                        below |= bit(i);
                        let cur = bk(below);
                        let x = (cur - prev) as f64;
                        prev = cur;
                        (x, x)
                    })
                    .collect()
            });
            Ok(CurvatureReport::new(Quantity::Betti { k }, Some(seed), stats.values(g, false)))
        }
    }
}

/// Expected category index. Exact mode evaluates the category on every
/// vertex subset; where the evaluator returns a bracket the expectation
/// becomes an exact bracket of expectations.
pub fn category_curvature(
    g: &SimpleGraph,
    eval: &dyn CategoryEvaluator,
    method: Method,
    seed: u64,
) -> Result<CurvatureReport> {
    let value = |m: u64| {
        let b = eval.evaluate(&g.induced(m));
        (b.lower as i64, b.upper as i64)
    };
    match method {
        Method::Exact => {
            let table = subset_table(g, value)?;
            Ok(CurvatureReport::new(Quantity::Category, None, expectation(g, &table)))
        }
        Method::MonteCarlo { samples } => {
            let memo: Mutex<HashMap<u64, (i64, i64)>> = Mutex::new(HashMap::new());
            let cached = |m: u64| {
                if let Some(&v) = memo.lock().get(&m) {
                    return v;
                }
                let v = value(m);
                memo.lock().insert(m, v);
                v
            };
            let stats = sample(g, samples, seed, |order| {
                let mut below = 0u64;
                let mut prev = (0, 0);
                order
                    .iter()
                    .map(|&i| {
                        below |= bit(i);
                        let cur = cached(below);
                        let d = ((cur.0 - prev.1) as f64, (cur.1 - prev.0) as f64);
                        prev = cur;
                        d
                    })
                    .collect()
            });
            Ok(CurvatureReport::new(Quantity::Category, Some(seed), stats.values(g, true)))
        }
    }
}

/// Values `(lower, upper)` of a subset function on every vertex subset.
fn subset_table(g: &SimpleGraph, f: impl Fn(u64) -> (i64, i64) + Sync + Send) -> Result<Vec<(i64, i64)>> {
    let n = g.order();
    if n > EXACT_SUBSET_LIMIT {
        return Err(Error::OverLimit {
            what: "exact curvature subset enumeration",
            size: n,
            limit: EXACT_SUBSET_LIMIT,
        });
    }
    Ok((0..1u64 << n).into_par_iter().map(f).collect())
}

fn expectation(g: &SimpleGraph, table: &[(i64, i64)]) -> BTreeMap<u32, CurvatureValue> {
    let n = g.order();
    let w = if n == 0 { Vec::new() } else { weights(n - 1) };
    let full = g.full_mask();
    (0..n)
        .into_par_iter()
        .map(|i| {
            let mut lo = Q::zero();
            let mut hi = Q::zero();
            for s in submasks(full & !bit(i)) {
                let (a0, a1) = table[s as usize];
                let (b0, b1) = table[(s | bit(i)) as usize];
                let wt = &w[popcount(s)];
                lo += wt * Q::from_integer(BigInt::from(b0 - a1));
                hi += wt * Q::from_integer(BigInt::from(b1 - a0));
            }
            let v = if lo == hi {
                CurvatureValue::Exact { value: lo }
            } else {
                CurvatureValue::Bracket { lower: lo, upper: hi }
            };
            (g.label(i), v)
        })
        .collect()
}

struct Stats {
    samples: usize,
    /// Per vertex index: sums of lower, lower², upper, upper².
    acc: Vec<[f64; 4]>,
}

impl Stats {
    fn values(&self, g: &SimpleGraph, bracket: bool) -> BTreeMap<u32, CurvatureValue> {
        let n = self.samples as f64;
        let se = |s: f64, s2: f64| {
            let mean = s / n;
            let var = if self.samples > 1 {
                ((s2 - n * mean * mean) / (n - 1.0)).max(0.0)
            } else {
                0.0
            };
            (mean, CONFIDENCE_Z * (var / n).sqrt())
        };
        self.acc
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let (lm, lr) = se(a[0], a[1]);
                let (um, ur) = se(a[2], a[3]);
                let v = if bracket && (a[0] != a[2] || a[1] != a[3]) {
                    CurvatureValue::MonteCarloBracket {
                        lower_mean: lm,
                        upper_mean: um,
                        radius: lr.max(ur),
                        samples: self.samples,
                    }
                } else {
                    CurvatureValue::MonteCarlo {
                        mean: lm,
                        radius: lr,
                        samples: self.samples,
                    }
                };
                (g.label(i), v)
            })
            .collect()
    }
}

/// Draws `samples` uniform orderings in a fixed number of independently
/// seeded chunks, so the result does not depend on the thread count. The
/// callback returns the per-vertex index interval in ordering position.
fn sample(
    g: &SimpleGraph,
    samples: usize,
    seed: u64,
    per_order: impl Fn(&[usize]) -> Vec<(f64, f64)> + Sync,
) -> Stats {
    let n = g.order();
    let chunks: Vec<Vec<[f64; 4]>> = (0..CHUNKS)
        .into_par_iter()
        .map(|c| {
            let count = samples / CHUNKS as usize + usize::from((c as usize) < samples % CHUNKS as usize);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let mut acc = vec![[0.0; 4]; n];
            let mut order: Vec<usize> = (0..n).collect();
            for _ in 0..count {
                order.shuffle(&mut rng);
                for (&i, (lo, hi)) in order.iter().zip(per_order(&order)) {
                    let a = &mut acc[i];
                    a[0] += lo;
                    a[1] += lo * lo;
                    a[2] += hi;
                    a[3] += hi * hi;
                }
            }
            acc
        })
        .collect();
    let mut acc = vec![[0.0; 4]; n];
    for ch in chunks {
        for (a, b) in acc.iter_mut().zip(ch) {
            for t in 0..4 {
                a[t] += b[t];
            }
        }
    }
    Stats { samples, acc }
}
