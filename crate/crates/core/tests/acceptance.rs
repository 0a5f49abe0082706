//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

mod common;

use std::time::{Duration, Instant};

use graphtop::category::{
    cat_bracket, gcat_bracket, strong_cat_bracket, tcat_bracket, verify_cover, BracketEvaluator, CategoryBracket,
    CategoryOptions, CoverMode,
};
use graphtop::census::{classify_homotopy, enumerate_connected};
use graphtop::cohomology::{betti, coboundary, cup_length, trim_betti, wedge, CohomologyBasis, Form};
use graphtop::complex::{euler_characteristic, fvector, CliqueComplex};
use graphtop::curvature::{category_curvature, euler_curvature, Method};
use graphtop::fixtures::{cycle, document, fixture, path};
use graphtop::homotopy::{apply_move, is_contractible, legal_moves, Budget};
use graphtop::linalg::{q, q_frac, Q};
use graphtop::morse::{crit_exact, index_profile, OrderingFunction, DEFAULT_DP_LIMIT};
use graphtop::SimpleGraph;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use common::*;

/// Collects the failed checks of one criterion.
#[derive(Default)]
struct Checks {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Checks {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    fn within(&mut self, elapsed: Duration, limit: Duration) {
        self.check(elapsed <= limit, || format!("took {elapsed:.1?}, limit {limit:?}"));
        self.note(format!("{elapsed:.1?}"));
    }
}

fn bracket(b: &CategoryBracket) -> (usize, usize) {
    (b.lower, b.upper)
}

fn crit(g: &SimpleGraph) -> usize {
    crit_exact(g, DEFAULT_DP_LIMIT).unwrap().0
}

fn criterion_1(c: &mut Checks) {
    let start = Instant::now();
    let opts = CategoryOptions::default();
    for n in 1..=7 {
        let g = fixture(&format!("complete_{n}")).unwrap();
        c.check(euler_characteristic(&g) == 1, || format!("K{n} χ"));
        c.check(is_contractible(&g), || format!("K{n} not contractible"));
        c.check(crit(&g) == 1, || format!("K{n} crit"));
        c.check(cup_length(&g).exact() == Some(1), || format!("K{n} cup"));
    }
    for n in 4..=8 {
        let g = cycle(n).unwrap();
        c.check(euler_characteristic(&g) == 0, || format!("C{n} χ"));
        c.check(betti(&g) == vec![1, 1], || format!("C{n} Betti"));
        c.check(cup_length(&g).exact() == Some(2), || format!("C{n} cup"));
        c.check(crit(&g) == 2, || format!("C{n} crit"));
        let gc = gcat_bracket(&g, &opts);
        c.check(bracket(&gc) == (2, 2), || format!("C{n} gcat {:?}", bracket(&gc)));
    }
    let g = fixture("octahedron").unwrap();
    c.check(euler_characteristic(&g) == 2, || "octahedron χ".into());
    c.check(betti(&g) == vec![1, 0, 1], || "octahedron Betti".into());
    c.check(cup_length(&g).exact() == Some(2), || "octahedron cup".into());
    c.check(crit(&g) == 2, || "octahedron crit".into());

    let doc = document("figure8").unwrap();
    let g = &doc.graph;
    c.check(euler_characteristic(g) == -1, || "figure-8 χ".into());
    c.check(betti(g) == vec![1, 2], || "figure-8 Betti".into());
    c.check(cup_length(g).exact() == Some(2), || "figure-8 cup".into());
    c.check(crit(g) == 3, || "figure-8 crit".into());
    let cover = &doc.metadata.covers["two_paths"];
    let v = verify_cover(g, cover, CoverMode::InItself, &Budget::default()).unwrap();
    c.check(v.valid && cover.len() == 2, || "figure-8 two-member cover does not verify".into());

    let doc = document("dunce_hat").unwrap();
    let g = &doc.graph;
    c.check(euler_characteristic(g) == 1, || "dunce hat χ".into());
    c.check(trim_betti(&betti(g)) == vec![1], || "dunce hat Betti".into());
    c.check(!is_contractible(g), || "dunce hat contractible".into());
    c.check(crit(g) == 3, || "dunce hat crit".into());
    let mut o = opts.clone();
    o.covers.extend(doc.metadata.covers.values().cloned());
    let t = tcat_bracket(g, &o);
    c.check(bracket(&t) == (2, 2), || {
        format!("dunce hat tcat bracket {:?}, expected [2,2]: no two-member cover found", bracket(&t))
    });
    c.within(start.elapsed(), Duration::from_secs(10));
}

fn criterion_2(c: &mut Checks) {
    let start = Instant::now();
    let doc = document("torus16").unwrap();
    let g = &doc.graph;
    c.check(betti(g) == vec![1, 2, 1], || "Betti".into());
    c.check(cup_length(g).exact() == Some(3), || "cup".into());
    c.check(crit(g) == 3, || "crit".into());
    let reference = verify_cover(g, &doc.metadata.covers["reference"], CoverMode::InItself, &Budget::default()).unwrap();
    c.check(reference.valid, || {
        format!(
            "reference cover fails: uncovered vertices {:?}, uncovered edges {:?}, members {:?}",
            reference.uncovered_vertices, reference.uncovered_edges, reference.members
        )
    });
    let disks = verify_cover(g, &doc.metadata.covers["three_disks"], CoverMode::InItself, &Budget::default()).unwrap();
    c.note(format!("replacement three-member cover valid: {}", disks.valid));
    let mut opts = CategoryOptions::default();
    opts.covers.extend(doc.metadata.covers.values().cloned());
    let t = tcat_bracket(g, &opts);
    let k = cat_bracket(g, &opts);
    let s = strong_cat_bracket(g, &opts);
    for (name, b) in [("tcat", &t), ("cat", &k), ("Cat", &s)] {
        c.check(bracket(b) == (3, 3), || format!("{name} bracket {:?}", bracket(b)));
    }
    c.within(start.elapsed(), Duration::from_secs(60));
}

fn criterion_3(c: &mut Checks) {
    let g = SimpleGraph::from_edges([], [(1, 2), (2, 3), (1, 3)]).unwrap();
    let cx = CliqueComplex::new(&g);
    // Edge forms given on the directed edges (1,2), (2,3), (3,1).
    let form = |v: [i64; 3]| {
        let mut f = Form::zero(1);
        f.set(0b011, q(v[0]));
        f.set(0b110, q(v[1]));
        f.set(0b101, q(-v[2]));
        f
    };
    let mut t = Form::zero(2);
    t.set(0b111, q(1));
    let units = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
    let third = t.scale(&q_frac(1, 3));
    for (a, b) in [(0, 1), (1, 2), (2, 0)] {
        let w = wedge(&cx, &form(units[a]), &form(units[b]));
        c.check(w == third, || format!("unit product {a}∧{b} = {:?}", w.get(0b111)));
        c.check(w.get(0b111) == triangle_wedge(units[a], units[b]), || "oracle disagrees".into());
    }
    for u in units {
        c.check(wedge(&cx, &form(u), &form(u)).is_zero(), || format!("square of {u:?} not zero"));
        c.check(wedge(&cx, &t, &form(u)).is_zero(), || "t∧1-form not zero".into());
    }
    c.check(wedge(&cx, &t, &t).is_zero(), || "t∧t not zero".into());
    let w = wedge(&cx, &form([3, 4, 5]), &form([2, 1, 4]));
    c.check(w == t.scale(&q_frac(4, 3)), || format!("(3,4,5)∧(2,1,4) = {}", w.get(0b111)));
    c.check(triangle_wedge([3, 4, 5], [2, 1, 4]) == q_frac(4, 3), || "oracle value".into());
}

fn criterion_4(c: &mut Checks) {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let cases = 1000;
    let mut failed = [0usize; 6];
    let laws = ["d∘d", "graded commutativity", "associativity", "Leibniz", "Euler-Poincaré", "gauge"];
    let mut gauge_cases = 0;
    for _ in 0..cases {
        let n = rng.gen_range(3..=8);
        let p = rng.gen_range(0.3..0.9);
        let g = random_graph(&mut rng, n, p);
        let cx = CliqueComplex::new(&g);
        let dim = cx.dim().unwrap_or(0);
        let deg = |rng: &mut ChaCha8Rng, max: usize| rng.gen_range(0..=max);

        let p = deg(&mut rng, dim);
        let f = Form::random(&cx, p, &mut rng, -3, 3);
        if !coboundary(&cx, &coboundary(&cx, &f)).is_zero() {
            failed[0] += 1;
        }

        let qd = deg(&mut rng, dim - p);
        let h = Form::random(&cx, qd, &mut rng, -3, 3);
        let fg = wedge(&cx, &f, &h);
        let gf = wedge(&cx, &h, &f);
        let sign = if p * qd % 2 == 0 { q(1) } else { q(-1) };
        if fg != gf.scale(&sign) {
            failed[1] += 1;
        }

        let r = deg(&mut rng, dim - p - qd);
        let k = Form::random(&cx, r, &mut rng, -3, 3);
        if wedge(&cx, &fg, &k) != wedge(&cx, &f, &wedge(&cx, &h, &k)) {
            failed[2] += 1;
        }

        if p + qd < dim {
            let lhs = coboundary(&cx, &fg);
            let sign = if p % 2 == 0 { q(1) } else { q(-1) };
            let rhs = wedge(&cx, &coboundary(&cx, &f), &h).add_scaled(&wedge(&cx, &f, &coboundary(&cx, &h)), &sign);
            if lhs != rhs {
                failed[3] += 1;
            }
        }

        let b = betti(&g);
        let alt = |v: &[usize]| v.iter().enumerate().map(|(i, &x)| if i % 2 == 0 { x as i64 } else { -(x as i64) }).sum::<i64>();
        if alt(&b) != alt(&fvector(&g)) {
            failed[4] += 1;
        }

        let basis = CohomologyBasis::new(&g);
        let classes: Vec<(usize, &Form)> = (1..=dim).flat_map(|d| basis.representatives(d).iter().map(move |f| (d, f))).collect();
        if classes.is_empty() {
            continue;
        }
        let (d1, x) = classes[rng.gen_range(0..classes.len())];
        let rest: Vec<&(usize, &Form)> = classes.iter().filter(|(d, _)| d1 + d <= dim).collect();
        let y = match rest.choose(&mut rng) {
            Some((_, y)) => (*y).clone(),
            None => {
                let mut one = Form::zero(0);
                for &s in cx.simplices(0) {
                    one.set(s, q(1));
                }
                one
            }
        };
        let shift = |rng: &mut ChaCha8Rng, f: &Form| {
            if f.degree() == 0 {
                return f.clone();
            }
            let e = Form::random(&cx, f.degree() - 1, rng, -3, 3);
            f.add(&coboundary(&cx, &e))
        };
        let (_, before) = basis.cup_product(&[x.clone(), y.clone()]).unwrap();
        let (x2, y2) = (shift(&mut rng, x), shift(&mut rng, &y));
        let (_, after) = basis.cup_product(&[x2, y2]).unwrap();
        gauge_cases += 1;
        if before != after {
            failed[5] += 1;
        }
    }
    for (law, &n) in laws.iter().zip(&failed) {
        c.check(n == 0, || format!("{law}: {n} failing cases"));
    }
    c.note(format!("{cases} cases, {gauge_cases} with a class to multiply"));
}

fn criterion_5(c: &mut Checks) {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for case in 0..500 {
        let n = rng.gen_range(1..=10);
        let p = rng.gen_range(0.2..0.8);
        let g = random_graph(&mut rng, n, p);
        let mut order = g.labels().to_vec();
        order.shuffle(&mut rng);
        let f = OrderingFunction::from_order(&g, order).unwrap();
        let m = matrix(&g);
        let mut below = 0u64;
        let mut total = 0;
        for r in index_profile(&g, &f, false) {
            below |= 1 << g.index_of(r.vertex).unwrap();
            total += r.index;
            if total != euler(&m, below) {
                c.failures.push(format!("case {case}: prefix sum {total} at vertex {}", r.vertex));
                break;
            }
        }
        c.check(total == euler_characteristic(&g), || format!("case {case}: total index {total}"));
    }
}

fn criterion_6(c: &mut Checks) {
    let start = Instant::now();
    let opts = CategoryOptions::default();
    let mut count = 0;
    for n in 1..=6 {
        for g in enumerate_connected(n).unwrap() {
            count += 1;
            let cup = cup_length(&g);
            let t = tcat_bracket(&g, &opts);
            let cr = crit(&g);
            c.check(cup.lower <= t.upper && t.upper <= cr, || {
                format!("{:?}: cup {} tcat upper {} crit {cr}", g.edges(), cup.lower, t.upper)
            });
            let brute = brute_crit(&g);
            c.check(brute == cr, || format!("{:?}: crit {cr}, brute force {brute}", g.edges()));
            let m = matrix(&g);
            let contractible = Contractible::new(&m).test(g.full_mask());
            c.check((cr == 1) == contractible, || format!("{:?}: crit {cr}, contractible {contractible}", g.edges()));
        }
    }
    c.note(format!("{count} graphs, {:.1?}", start.elapsed()));
}

fn exact_at(r: &graphtop::curvature::CurvatureReport, v: u32) -> Option<Q> {
    r.value(v).and_then(|x| x.exact().cloned())
}

fn criterion_7(c: &mut Checks) {
    let eval = BracketEvaluator::default();
    for n in 4..=8u32 {
        let g = cycle(n).unwrap();
        let k = euler_curvature(&g);
        c.check(k.values.values().all(|v| v.exact() == Some(&q(0))), || format!("C{n} Euler curvature"));
        c.check(k.sum.exact() == Some(&q(0)), || format!("C{n} Euler sum"));
        let cc = category_curvature(&g, &eval, Method::Exact, 0).unwrap();
        c.check((1..=n).all(|v| exact_at(&cc, v) == Some(q_frac(2, n as i64))), || format!("C{n} category curvature"));
    }
    for n in 2..=6u32 {
        let g = path(n).unwrap();
        let k = euler_curvature(&g);
        for v in [1, n] {
            c.check(exact_at(&k, v) == Some(q_frac(1, 2)), || format!("P{n} endpoint {v} Euler curvature"));
        }
        let cc = category_curvature(&g, &eval, Method::Exact, 0).unwrap();
        for v in [1, n] {
            c.check(exact_at(&cc, v) == Some(q_frac(1, 2)), || format!("P{n} endpoint {v} category curvature"));
        }
    }
    for n in 1..=7u32 {
        let g = fixture(&format!("complete_{n}")).unwrap();
        let cc = category_curvature(&g, &eval, Method::Exact, 0).unwrap();
        c.check((1..=n).all(|v| exact_at(&cc, v) == Some(q_frac(1, n as i64))), || format!("K{n} category curvature"));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for case in 0..500 {
        let n = rng.gen_range(1..=10);
        let p = rng.gen_range(0.2..0.8);
        let g = random_graph(&mut rng, n, p);
        let k = euler_curvature(&g);
        c.check(k.sum.exact() == Some(&q(euler_characteristic(&g))), || format!("Gauss-Bonnet case {case}"));
        if n <= 6 && case % 5 == 0 {
            let brute = brute_euler_curvature(&g);
            let ok = (0..n).all(|i| exact_at(&k, g.label(i)).as_ref() == Some(&brute[i]));
            c.check(ok, || format!("case {case}: Euler curvature differs from the ordering average"));
        }
    }

    for (name, expect) in [("octahedron", q_frac(1, 4)), ("icosahedron", q_frac(1, 6))] {
        let g = fixture(name).unwrap();
        let cc = category_curvature(&g, &eval, Method::Exact, 0).unwrap();
        let values: Vec<&graphtop::curvature::CurvatureValue> = cc.values.values().collect();
        let ok = values.iter().all(|v| v.contains(&expect));
        c.check(ok, || {
            let got: Vec<String> = values.iter().map(|v| serde_json::to_string(v).unwrap()).collect();
            format!("{name} category curvature {} expected {expect}", got[0])
        });
    }
}

fn criterion_8a(c: &mut Checks) {
    let expected = [1, 1, 2, 6, 21, 112, 853];
    for n in 1..=7 {
        let got = enumerate_connected(n).unwrap().len();
        let burnside = burnside_connected(n) as usize;
        c.check(got == expected[n - 1] && burnside == got, || {
            format!("n={n}: enumerated {got}, Burnside {burnside}, expected {}", expected[n - 1])
        });
        if n <= 6 {
            let brute = brute_connected_classes(n);
            c.check(brute == got, || format!("n={n}: brute force {brute}, enumerated {got}"));
        }
    }
}

fn criterion_8b(c: &mut Checks) {
    let start = Instant::now();
    let expected = [1, 1, 1, 2, 2, 4, 4];
    let mut found = Vec::new();
    for n in 1..=7 {
        let r = classify_homotopy(n, &Budget::default()).unwrap();
        match r.homotopy_types() {
            Some(h) => {
                found.push(h.to_string());
                c.check(h == expected[n - 1], || format!("h({n}) = {h}, expected {}", expected[n - 1]));
            }
            None => {
                found.push(format!("[{},{}]", r.types_lower, r.types_upper));
                c.failures.push(format!("h({n}) unresolved: [{}, {}]", r.types_lower, r.types_upper));
            }
        }
    }
    c.note(format!("h(1..7) = {}, {:.1?}", found.join(","), start.elapsed()));
}

fn criterion_9(c: &mut Checks) {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut moves = 0;
    while moves < 1000 {
        let n = rng.gen_range(3..=7);
        let p = rng.gen_range(0.3..0.7);
        let mut g = random_connected(&mut rng, n, p);
        let chi = euler_characteristic(&g);
        let b = trim_betti(&betti(&g));
        let cup = cup_length(&g);
        for _ in 0..20 {
            let options = legal_moves(&g, n + 2, true);
            let Some(mv) = options.choose(&mut rng) else { break };
            g = apply_move(&g, mv).unwrap();
            moves += 1;
            c.check(euler_characteristic(&g) == chi, || format!("χ changed after {mv:?}"));
            c.check(trim_betti(&betti(&g)) == b, || format!("Betti changed after {mv:?}"));
            c.check(cup_length(&g).exact() == cup.exact(), || format!("cup changed after {mv:?}"));
        }
    }
    c.note(format!("{moves} moves"));
}

fn main() {
    let criteria: [(&str, &str, fn(&mut Checks)); 10] = [
        ("1", "fixture invariants", criterion_1),
        ("2", "torus chain", criterion_2),
        ("3", "triangle wedge table", criterion_3),
        ("4", "algebra laws", criterion_4),
        ("5", "Poincaré-Hopf", criterion_5),
        ("6", "category sandwich over small graphs", criterion_6),
        ("7", "curvature", criterion_7),
        ("8a", "isomorphism class counts", criterion_8a),
        ("8b", "homotopy type counts", criterion_8b),
        ("9", "move invariance", criterion_9),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (id, title, run) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| f == id) {
            continue;
        }
        let mut checks = Checks::default();
        run(&mut checks);
        let status = if checks.failures.is_empty() { "PASS" } else { "FAIL" };
        let mut line = format!("{status} criterion {id}: {title}");
        if !checks.notes.is_empty() {
            line += &format!(" ({})", checks.notes.join("; "));
        }
        println!("{line}");
        for f in checks.failures.iter().take(10) {
            println!("    {f}");
        }
        if checks.failures.len() > 10 {
            println!("    ... {} more", checks.failures.len() - 10);
        }
        if !checks.failures.is_empty() {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
