//! Slow, independent reference implementations used as test oracles. None
//! of these call into the library beyond building graphs.

#![allow(dead_code)]

use std::collections::{HashMap, HashSet};

use graphtop::linalg::{q, q_frac, Q};
use graphtop::SimpleGraph;
use rand::Rng;

pub fn random_graph(rng: &mut impl Rng, n: usize, p: f64) -> SimpleGraph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                edges.push((i, j));
            }
        }
    }
    SimpleGraph::from_index_edges(n, &edges).unwrap()
}

pub fn random_connected(rng: &mut impl Rng, n: usize, p: f64) -> SimpleGraph {
    loop {
        let g = random_graph(rng, n, p);
        if g.is_connected() {
            return g;
        }
    }
}

/// Dense boolean adjacency by vertex index.
pub fn matrix(g: &SimpleGraph) -> Vec<Vec<bool>> {
    let n = g.order();
    let mut m = vec![vec![false; n]; n];
    for (u, v) in g.edges() {
        let (i, j) = (g.index_of(u).unwrap(), g.index_of(v).unwrap());
        m[i][j] = true;
        m[j][i] = true;
    }
    m
}

fn members(set: u64) -> Vec<usize> {
    (0..64).filter(|i| set >> i & 1 == 1).collect()
}

/// Euler characteristic of the clique complex on `set`, by testing every
/// subset for being a clique.
pub fn euler(m: &[Vec<bool>], set: u64) -> i64 {
    let vs = members(set);
    let mut chi = 0;
    for sub in 1u64..1 << vs.len() {
        let pick: Vec<usize> = (0..vs.len()).filter(|&k| sub >> k & 1 == 1).map(|k| vs[k]).collect();
        let clique = pick.iter().enumerate().all(|(a, &x)| pick[a + 1..].iter().all(|&y| m[x][y]));
        if clique {
            chi += if pick.len() % 2 == 1 { 1 } else { -1 };
        }
    }
    chi
}

/// Contractibility straight from the recursive definition: a single vertex
/// is contractible, and so is a graph with a vertex whose sphere and whose
/// complement are both contractible.
pub struct Contractible<'a> {
    m: &'a [Vec<bool>],
    memo: HashMap<u64, bool>,
}

impl<'a> Contractible<'a> {
    pub fn new(m: &'a [Vec<bool>]) -> Self {
        Self { m, memo: HashMap::new() }
    }

    pub fn test(&mut self, set: u64) -> bool {
        if set.count_ones() == 1 {
            return true;
        }
        if set == 0 {
            return false;
        }
        if let Some(&v) = self.memo.get(&set) {
            return v;
        }
        let mut result = false;
        for x in members(set) {
            let sphere = members(set).into_iter().filter(|&y| self.m[x][y]).fold(0u64, |a, y| a | 1 << y);
            if self.test(sphere) && self.test(set & !(1 << x)) {
                result = true;
                break;
            }
        }
        self.memo.insert(set, result);
        result
    }
}

pub fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize])) {
    fn rec(p: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
        if k == p.len() {
            f(p);
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            rec(p, k + 1, f);
            p.swap(k, i);
        }
    }
    let mut p: Vec<usize> = (0..n).collect();
    rec(&mut p, 0, &mut f);
}

/// Minimum number of critical points over all `n!` orderings.
pub fn brute_crit(g: &SimpleGraph) -> usize {
    let m = matrix(g);
    let mut c = Contractible::new(&m);
    let mut best = usize::MAX;
    for_each_permutation(g.order(), |order| {
        let mut below = 0u64;
        let mut count = 0;
        for &x in order {
            let minus = (0..m.len()).filter(|&y| below >> y & 1 == 1 && m[x][y]).fold(0u64, |a, y| a | 1 << y);
            if !c.test(minus) {
                count += 1;
            }
            below |= 1 << x;
        }
        best = best.min(count);
    });
    best
}

/// Euler curvature per vertex index: the average of `1 - χ(S⁻(x))` over all
/// orderings.
pub fn brute_euler_curvature(g: &SimpleGraph) -> Vec<Q> {
    let m = matrix(g);
    let n = g.order();
    let mut sums = vec![0i64; n];
    let mut count = 0i64;
    for_each_permutation(n, |order| {
        let mut below = 0u64;
        for &x in order {
            let minus = (0..n).filter(|&y| below >> y & 1 == 1 && m[x][y]).fold(0u64, |a, y| a | 1 << y);
            sums[x] += 1 - euler(&m, minus);
            below |= 1 << x;
        }
        count += 1;
    });
    sums.into_iter().map(|s| q_frac(s, count)).collect()
}

/// Connected graphs on `n ≤ 6` vertices up to isomorphism, by taking the
/// lexicographically smallest edge bitstring over all relabellings.
pub fn brute_connected_classes(n: usize) -> usize {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut perms = Vec::new();
    for_each_permutation(n, |p| perms.push(p.to_vec()));
    let index: HashMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(k, &e)| (e, k)).collect();
    let mut seen = HashSet::new();
    for code in 0u64..1 << pairs.len() {
        let edges: Vec<(usize, usize)> = (0..pairs.len()).filter(|&k| code >> k & 1 == 1).map(|k| pairs[k]).collect();
        if n > 0 && !SimpleGraph::from_index_edges(n, &edges).unwrap().is_connected() {
            continue;
        }
        let canon = perms
            .iter()
            .map(|p| {
                edges.iter().fold(0u64, |a, &(u, v)| {
                    let (x, y) = (p[u].min(p[v]), p[u].max(p[v]));
                    a | 1 << index[&(x, y)]
                })
            })
            .min()
            .unwrap();
        seen.insert(canon);
    }
    seen.len()
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn partitions(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if n == 0 {
        out.push(cur.clone());
        return;
    }
    for k in (1..=n.min(max)).rev() {
        cur.push(k);
        partitions(n - k, k, cur, out);
        cur.pop();
    }
}

/// Unlabelled graphs on `n` vertices by Burnside over cycle types.
fn all_graphs(n: usize) -> u128 {
    if n == 0 {
        return 1;
    }
    let fact = |k: usize| (1..=k as u128).product::<u128>();
    let mut parts = Vec::new();
    partitions(n, n, &mut Vec::new(), &mut parts);
    let mut total = 0u128;
    for p in parts {
        let mut mult: HashMap<usize, usize> = HashMap::new();
        for &k in &p {
            *mult.entry(k).or_default() += 1;
        }
        let centralizer: u128 = mult.iter().map(|(&k, &m)| (k as u128).pow(m as u32) * fact(m)).product();
        let class_size = fact(n) / centralizer;
        // Orbits of the permutation on unordered vertex pairs.
        let mut orbits = 0;
        for (a, &x) in p.iter().enumerate() {
            orbits += x / 2;
            for &y in &p[a + 1..] {
                orbits += gcd(x, y);
            }
        }
        total += class_size << orbits;
    }
    total / fact(n)
}

/// Connected unlabelled graphs via the inverse Euler transform of the
/// Burnside counts.
pub fn burnside_connected(n: usize) -> u128 {
    let a: Vec<i128> = (0..=n).map(|k| all_graphs(k) as i128).collect();
    let mut b = vec![0i128; n + 1];
    let mut c = vec![0i128; n + 1];
    for k in 1..=n {
        let mut bk = k as i128 * a[k];
        for j in 1..k {
            bk -= b[j] * a[k - j];
        }
        b[k] = bk;
        let mut s = bk;
        for d in 1..k {
            if k % d == 0 {
                s -= d as i128 * c[d];
            }
        }
        c[k] = s / k as i128;
    }
    c[n] as u128
}

/// Cup product of two 1-forms on a triangle, straight from the shuffle and
/// rotation formula; forms are given on the directed edges (0,1), (1,2), (2,0).
pub fn triangle_wedge(f: [i64; 3], g: [i64; 3]) -> Q {
    let val = |h: &[i64; 3], a: usize, b: usize| -> i64 {
        match (a, b) {
            (0, 1) => h[0],
            (1, 2) => h[1],
            (2, 0) => h[2],
            (1, 0) => -h[0],
            (2, 1) => -h[1],
            (0, 2) => -h[2],
            _ => unreachable!(),
        }
    };
    let mut total = 0;
    for z in [[0, 1, 2], [1, 2, 0], [2, 0, 1]] {
        total += val(&f, z[0], z[1]) * val(&g, z[0], z[2]) - val(&f, z[0], z[2]) * val(&g, z[0], z[1]);
    }
    q(total) * q_frac(1, 3)
}
