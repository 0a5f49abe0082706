//! Discrete differential forms on the clique complex, exact cohomology and
//! the cup product.
//!
//! A `k`-form is a function on ordered `k`-simplices that is antisymmetric
//! under permutation of the vertices; it is stored once per ascending simplex.
//! The product of a `p`-form and a `q`-form is first formed at a distinguished
//! vertex by a shuffle sum and then averaged over the `p + q + 1` cyclic
//! rotations of the simplex with the sign of each rotation.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::bits::{popcount, Bits};
use crate::complex::CliqueComplex;
use crate::error::{Error, Result};
use crate::graph::SimpleGraph;
use crate::linalg::{kernel, q, rank_integer, Echelon, Q};

/// A `degree`-form: values on ascending `degree`-simplices, zeros omitted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Form {
    degree: usize,
    entries: BTreeMap<u64, Q>,
}

/// Sign of the permutation sorting `seq` (distinct entries assumed).
fn sort_sign(seq: &[usize]) -> i32 {
    let mut s = 1;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                s = -s;
            }
        }
    }
    s
}

impl Form {
    pub fn zero(degree: usize) -> Self {
        Self {
            degree,
            entries: BTreeMap::new(),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Value on the ascending simplex `simplex`.
    pub fn get(&self, simplex: u64) -> Q {
        self.entries.get(&simplex).cloned().unwrap_or_else(Q::zero)
    }

    pub fn set(&mut self, simplex: u64, value: Q) {
        debug_assert_eq!(popcount(simplex), self.degree + 1);
        if value.is_zero() {
            self.entries.remove(&simplex);
        } else {
            self.entries.insert(simplex, value);
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (u64, &Q)> {
        self.entries.iter().map(|(&k, v)| (k, v))
    }

    /// Value on an ordered vertex tuple; zero when a vertex repeats.
    pub fn eval(&self, seq: &[usize]) -> Q {
        let mask = seq.iter().fold(0u64, |m, &v| m | 1 << v);
        if popcount(mask) != seq.len() {
            return Q::zero();
        }
        match self.entries.get(&mask) {
            None => Q::zero(),
            Some(v) if sort_sign(seq) > 0 => v.clone(),
            Some(v) => -v.clone(),
        }
    }

    pub fn from_dense(c: &CliqueComplex, degree: usize, values: &[Q]) -> Self {
        let mut f = Form::zero(degree);
        for (&s, v) in c.simplices(degree).iter().zip(values) {
            f.set(s, v.clone());
        }
        f
    }

    pub fn to_dense(&self, c: &CliqueComplex) -> Vec<Q> {
        c.simplices(self.degree).iter().map(|&s| self.get(s)).collect()
    }

    /// Form with independent uniform integer values in `lo..=hi` on every simplex.
    pub fn random(c: &CliqueComplex, degree: usize, rng: &mut impl Rng, lo: i64, hi: i64) -> Self {
        let mut f = Form::zero(degree);
        for &s in c.simplices(degree) {
            f.set(s, q(rng.gen_range(lo..=hi)));
        }
        f
    }

    pub fn add(&self, other: &Form) -> Form {
        self.add_scaled(other, &Q::one())
    }

    pub fn sub(&self, other: &Form) -> Form {
        self.add_scaled(other, &-Q::one())
    }

    pub fn add_scaled(&self, other: &Form, k: &Q) -> Form {
        assert_eq!(self.degree, other.degree, "degree mismatch");
        let mut out = self.clone();
        for (&s, v) in &other.entries {
            let nv = out.get(s) + v * k;
            out.set(s, nv);
        }
        out
    }

    pub fn scale(&self, k: &Q) -> Form {
        let mut out = Form::zero(self.degree);
        for (&s, v) in &self.entries {
            out.set(s, v * k);
        }
        out
    }

    /// JSON document with simplices written as vertex labels.
    pub fn to_doc(&self, g: &SimpleGraph) -> FormDoc {
        let entries = self
            .entries
            .iter()
            .map(|(&s, v)| {
                (
                    g.labels_of(s),
                    int_value(v.numer()),
                    int_value(v.denom()),
                )
            })
            .collect();
        FormDoc {
            degree: self.degree,
            entries,
        }
    }

    pub fn from_doc(doc: &FormDoc, g: &SimpleGraph, c: &CliqueComplex) -> Result<Form> {
        let mut f = Form::zero(doc.degree);
        for (verts, num, den) in &doc.entries {
            if verts.len() != doc.degree + 1 {
                return Err(Error::InvalidForm(format!(
                    "simplex {verts:?} does not have {} vertices",
                    doc.degree + 1
                )));
            }
            let seq: Vec<usize> = verts
                .iter()
                .map(|&l| g.try_index(l))
                .collect::<Result<_>>()?;
            let mask = seq.iter().fold(0u64, |m, &v| m | 1 << v);
            if popcount(mask) != seq.len() || c.index_of(doc.degree, mask).is_none() {
                return Err(Error::InvalidForm(format!("{verts:?} is not a simplex")));
            }
            let den = parse_int(den)?;
            if den.is_zero() {
                return Err(Error::InvalidForm("zero denominator".into()));
            }
            let mut v = Q::new(parse_int(num)?, den);
            if sort_sign(&seq) < 0 {
                v = -v;
            }
            let nv = f.get(mask) + v;
            f.set(mask, nv);
        }
        Ok(f)
    }
}

fn int_value(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => Value::from(v),
        None => Value::from(x.to_string()),
    }
}

fn parse_int(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| Error::InvalidForm(format!("{n} is not an integer"))),
        Value::String(s) => s
            .parse()
            .map_err(|_| Error::InvalidForm(format!("{s} is not an integer"))),
        other => Err(Error::InvalidForm(format!("{other} is not an integer"))),
    }
}

/// Serialised form: `{degree, entries: [[vertices...], numerator, denominator]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FormDoc {
    pub degree: usize,
    pub entries: Vec<(Vec<u32>, Value, Value)>,
}

/// Exterior derivative: `df(x_0..x_{k+1}) = Σ_j (-1)^j f(x_0..x̂_j..x_{k+1})`.
pub fn coboundary(c: &CliqueComplex, f: &Form) -> Form {
    let k = f.degree;
    let mut out = Form::zero(k + 1);
    if f.is_zero() {
        return out;
    }
    for &s in c.simplices(k + 1) {
        let mut total = Q::zero();
        for (j, v) in Bits(s).enumerate() {
            let face = f.get(s & !(1 << v));
            if !face.is_zero() {
                if j % 2 == 0 {
                    total += face;
                } else {
                    total -= face;
                }
            }
        }
        out.set(s, total);
    }
    out
}

/// Product centred at `z[0]`: the signed sum over `(p, q)` shuffles of the
/// remaining vertices of `f(z_0, u) g(z_0, v)`.
pub fn pre_wedge(f: &Form, g: &Form, z: &[usize]) -> Q {
    let (p, qd) = (f.degree, g.degree);
    assert_eq!(z.len(), p + qd + 1, "tuple length must be p + q + 1");
    let rest = &z[1..];
    let mut total = Q::zero();
    let mut first = Vec::with_capacity(p + 1);
    let mut second = Vec::with_capacity(qd + 1);
    for chosen in 0u64..(1u64 << (p + qd)) {
        if popcount(chosen) != p {
            continue;
        }
        first.clear();
        second.clear();
        first.push(z[0]);
        second.push(z[0]);
        let mut perm = Vec::with_capacity(p + qd);
        for (i, &x) in rest.iter().enumerate() {
            if chosen >> i & 1 == 1 {
                first.push(x);
                perm.push(i);
            }
        }
        for (i, &x) in rest.iter().enumerate() {
            if chosen >> i & 1 == 0 {
                second.push(x);
                perm.push(i);
            }
        }
        let a = f.eval(&first);
        if a.is_zero() {
            continue;
        }
        let b = g.eval(&second);
        if b.is_zero() {
            continue;
        }
        if sort_sign(&perm) > 0 {
            total += a * b;
        } else {
            total -= a * b;
        }
    }
    total
}

/// Wedge product: the pre-wedge averaged over cyclic rotations of each
/// `(p + q)`-simplex, each rotation weighted by its sign.
pub fn wedge(c: &CliqueComplex, f: &Form, g: &Form) -> Form {
    let m = f.degree + g.degree;
    let mut out = Form::zero(m);
    if f.is_zero() || g.is_zero() {
        return out;
    }
    let scale = Q::new(BigInt::one(), BigInt::from(m + 1));
    let mut z = Vec::with_capacity(m + 1);
    for &s in c.simplices(m) {
        let verts: Vec<usize> = Bits(s).collect();
        let mut total = Q::zero();
        for r in 0..=m {
            z.clear();
            z.extend(verts[r..].iter().chain(&verts[..r]));
            let v = pre_wedge(f, g, &z);
            // A rotation by r of m + 1 elements has sign (-1)^(r m).
            if (r * m) % 2 == 0 {
                total += v;
            } else {
                total -= v;
            }
        }
        out.set(s, total * &scale);
    }
    out
}

/// Integer matrix of `d : Ω_k → Ω_{k+1}` with rows indexed by `(k+1)`-simplices.
fn coboundary_matrix(c: &CliqueComplex, k: usize) -> Vec<Vec<i64>> {
    let cols = c.count(k);
    c.simplices(k + 1)
        .iter()
        .map(|&s| {
            let mut row = vec![0i64; cols];
            for (j, v) in Bits(s).enumerate() {
                let idx = c.index_of(k, s & !(1 << v)).unwrap();
                row[idx] = if j % 2 == 0 { 1 } else { -1 };
            }
            row
        })
        .collect()
}

/// Betti numbers `b_0..b_n` where `n` is the top simplex dimension.
pub fn betti_of_complex(c: &CliqueComplex) -> Vec<usize> {
    let n = c.len();
    let ranks: Vec<usize> = (0..n)
        .map(|k| rank_integer(&coboundary_matrix(c, k)))
        .collect();
    (0..n)
        .map(|k| c.count(k) - ranks[k] - if k > 0 { ranks[k - 1] } else { 0 })
        .collect()
}

pub fn betti(g: &SimpleGraph) -> Vec<usize> {
    betti_of_complex(&CliqueComplex::new(g))
}

pub fn betti_mask(adj: &[u64], mask: u64) -> Vec<usize> {
    betti_of_complex(&CliqueComplex::from_mask(adj, mask))
}

/// Betti vector with trailing zeros removed.
pub fn trim_betti(b: &[usize]) -> Vec<usize> {
    let end = b.iter().rposition(|&x| x != 0).map_or(0, |i| i + 1);
    b[..end].to_vec()
}

/// Cohomology of a graph: representatives of a basis of each `H^k` together
/// with exact membership tests for closed and exact forms.
#[derive(Clone, Debug)]
pub struct CohomologyBasis {
    complex: CliqueComplex,
    exact: Vec<Echelon>,
    reps: Vec<Vec<Form>>,
}

impl CohomologyBasis {
    pub fn new(g: &SimpleGraph) -> Self {
        Self::from_complex(CliqueComplex::new(g))
    }

    pub fn from_complex(complex: CliqueComplex) -> Self {
        let n = complex.len();
        let mut exact = Vec::with_capacity(n);
        let mut reps = Vec::with_capacity(n);
        for k in 0..n {
            let mut image = Echelon::new(complex.count(k));
            if k > 0 {
                // Image of d_{k-1}: columns of its matrix, i.e. d of each basis form.
                for i in 0..complex.count(k - 1) {
                    let mut e = Form::zero(k - 1);
                    e.set(complex.simplices(k - 1)[i], Q::one());
                    image.insert(&coboundary(&complex, &e).to_dense(&complex));
                }
            }
            let d: Vec<Vec<Q>> = coboundary_matrix(&complex, k)
                .into_iter()
                .map(|r| r.into_iter().map(q).collect())
                .collect();
            let mut span = image.clone();
            let mut hk = Vec::new();
            for v in kernel(&d, complex.count(k)) {
                if span.insert(&v) {
                    hk.push(Form::from_dense(&complex, k, &v));
                }
            }
            exact.push(image);
            reps.push(hk);
        }
        Self {
            complex,
            exact,
            reps,
        }
    }

    pub fn complex(&self) -> &CliqueComplex {
        &self.complex
    }

    pub fn betti(&self) -> Vec<usize> {
        self.reps.iter().map(Vec::len).collect()
    }

    /// Basis representatives of `H^k`.
    pub fn representatives(&self, k: usize) -> &[Form] {
        self.reps.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn is_closed(&self, f: &Form) -> bool {
        coboundary(&self.complex, f).is_zero()
    }

    /// Is `f` a coboundary?
    pub fn is_exact(&self, f: &Form) -> bool {
        if f.is_zero() {
            return true;
        }
        match self.exact.get(f.degree) {
            Some(e) => e.contains(&f.to_dense(&self.complex)),
            None => false,
        }
    }

    /// Wedge of the given closed forms, left to right. Returns the product
    /// representative and whether its class is non-zero.
    pub fn cup_product(&self, classes: &[Form]) -> Result<(Form, bool)> {
        let Some((first, rest)) = classes.split_first() else {
            return Err(Error::InvalidForm("empty product".into()));
        };
        for f in classes {
            if !self.is_closed(f) {
                return Err(Error::InvalidForm(format!(
                    "{}-form is not closed",
                    f.degree
                )));
            }
        }
        let mut acc = first.clone();
        for f in rest {
            acc = wedge(&self.complex, &acc, f);
        }
        let nonzero = !self.is_exact(&acc);
        Ok((acc, nonzero))
    }

    /// Cup length with a witness; see [`CupLength`].
    pub fn cup_length(&self, max_products: usize) -> CupLength {
        let top = (1..self.reps.len())
            .rev()
            .find(|&k| !self.reps[k].is_empty())
            .unwrap_or(0);
        let gens: Vec<(usize, usize)> = (1..self.reps.len())
            .flat_map(|k| (0..self.reps[k].len()).map(move |i| (k, i)))
            .collect();
        let mut st = CupSearch {
            basis: self,
            gens: &gens,
            top,
            best: Vec::new(),
            budget: max_products,
            exhausted: true,
        };
        for &g in &gens {
            if st.best.len() == top {
                break;
            }
            let f = self.reps[g.0][g.1].clone();
            st.extend(vec![g], f);
        }
        let found = st.best.len();
        CupLength {
            lower: 1 + found,
            upper: 1 + if st.exhausted { found } else { top },
            witness: st.best,
        }
    }
}

/// Cup length bracket: `1 + L` where `L` is the largest number of
/// positive-degree classes with a non-vanishing product. `witness` lists the
/// factors as `(degree, basis index)` pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CupLength {
    pub lower: usize,
    pub upper: usize,
    pub witness: Vec<(usize, usize)>,
}

impl CupLength {
    pub fn exact(&self) -> Option<usize> {
        (self.lower == self.upper).then_some(self.lower)
    }
}

struct CupSearch<'a> {
    basis: &'a CohomologyBasis,
    gens: &'a [(usize, usize)],
    top: usize,
    best: Vec<(usize, usize)>,
    budget: usize,
    exhausted: bool,
}

impl CupSearch<'_> {
    /// `prod` is the non-vanishing product of the factors in `seq`.
    fn extend(&mut self, seq: Vec<(usize, usize)>, prod: Form) {
        if seq.len() > self.best.len() {
            self.best = seq.clone();
        }
        if self.best.len() == self.top {
            return;
        }
        for &g in self.gens {
            if prod.degree + g.0 > self.top {
                continue;
            }
            if self.budget == 0 {
                self.exhausted = false;
                return;
            }
            self.budget -= 1;
            let next = wedge(&self.basis.complex, &prod, &self.basis.reps[g.0][g.1]);
            if !self.basis.is_exact(&next) {
                let mut s = seq.clone();
                s.push(g);
                self.extend(s, next);
                if self.best.len() == self.top {
                    return;
                }
            }
        }
    }
}

pub const DEFAULT_MAX_PRODUCTS: usize = 200_000;

pub fn cup_length(g: &SimpleGraph) -> CupLength {
    CohomologyBasis::new(g).cup_length(DEFAULT_MAX_PRODUCTS)
}

/// `1 + 2t + t^2` style rendering of a Betti vector.
pub fn poincare_polynomial(b: &[usize]) -> String {
    let terms: Vec<String> = b
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(k, &c)| match (k, c) {
            (0, c) => c.to_string(),
            (1, 1) => "t".into(),
            (1, c) => format!("{c}t"),
            (k, 1) => format!("t^{k}"),
            (k, c) => format!("{c}t^{k}"),
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

/// True if every entry of the form is an integer of absolute value at most `bound`.
pub fn is_small_integral(f: &Form, bound: i64) -> bool {
    f.entries
        .values()
        .all(|v| v.is_integer() && v.numer().abs() <= BigInt::from(bound))
}
