//! Named example graphs, some with attached covers and orderings.
//!
//! Parametric families take their size after an underscore: `path_5`,
//! `cycle_6`, `complete_4`, `star_3` (centre plus three leaves), `wheel_5`
//! (hub plus a five-cycle) and `discrete_4`.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::category::{Cover, CoverMember};
use crate::error::{Error, Result};
use crate::graph::SimpleGraph;
use crate::io::{GraphDocument, Metadata};

/// Fixed-name fixtures.
pub const NAMED: &[&str] = &[
    "octahedron",
    "icosahedron",
    "cross_polytope_3",
    "figure8",
    "dunce_hat",
    "torus16",
];

/// Parametric families, used as `NAME_n`.
pub const FAMILIES: &[&str] = &["path", "cycle", "complete", "star", "wheel", "discrete"];

pub fn list() -> Vec<String> {
    FAMILIES
        .iter()
        .map(|f| format!("{f}_n"))
        .chain(NAMED.iter().map(|s| s.to_string()))
        .collect()
}

pub fn fixture(name: &str) -> Result<SimpleGraph> {
    Ok(document(name)?.graph)
}

/// The fixture with its metadata.
pub fn document(name: &str) -> Result<GraphDocument> {
    let unknown = || Error::UnknownFixture(name.to_string());
    let (graph, metadata) = match name {
        "octahedron" => (octahedron(), described("boundary of the octahedron, antipodal pairs (1,2), (3,4), (5,6)")),
        "icosahedron" => icosahedron(),
        "cross_polytope_3" | "sixteen_cell" => (
            cross_polytope(4),
            described("boundary of the 16-cell, a 3-sphere; antipodal pairs (1,2), (3,4), (5,6), (7,8)"),
        ),
        "figure8" => figure8(),
        "dunce_hat" => dunce_hat(),
        "torus16" => torus16(),
        _ => {
            let (family, n) = name.rsplit_once('_').ok_or_else(unknown)?;
            let n: u32 = n.parse().map_err(|_| unknown())?;
            let g = match family {
                "path" => path(n),
                "cycle" => cycle(n),
                "complete" => complete(n),
                "star" => star(n),
                "wheel" => wheel(n),
                "discrete" => SimpleGraph::discrete(1..=n),
                _ => return Err(unknown()),
            }?;
            (g, Metadata::default())
        }
    };
    let mut metadata = metadata;
    metadata.name = Some(name.to_string());
    Ok(GraphDocument { graph, metadata })
}

fn described(text: &str) -> Metadata {
    Metadata {
        description: Some(text.to_string()),
        ..Metadata::default()
    }
}

/// Path on `1..=n`.
pub fn path(n: u32) -> Result<SimpleGraph> {
    SimpleGraph::from_edges(1..=n, (1..n).map(|i| (i, i + 1)))
}

/// Cycle on `1..=n`; needs `n ≥ 3`.
pub fn cycle(n: u32) -> Result<SimpleGraph> {
    if n < 3 {
        return Err(Error::Document(format!("a cycle needs at least 3 vertices, got {n}")));
    }
    SimpleGraph::from_edges(1..=n, (1..=n).map(|i| (i, i % n + 1)))
}

/// Complete graph on `1..=n`.
pub fn complete(n: u32) -> Result<SimpleGraph> {
    SimpleGraph::from_edges(1..=n, (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j))))
}

/// Centre 0 joined to leaves `1..=n`.
pub fn star(n: u32) -> Result<SimpleGraph> {
    SimpleGraph::from_edges(0..=n, (1..=n).map(|i| (0, i)))
}

/// Hub 0 joined to the cycle `1..=n`.
pub fn wheel(n: u32) -> Result<SimpleGraph> {
    let rim = cycle(n)?;
    SimpleGraph::from_edges(0..=n, rim.edges().into_iter().chain((1..=n).map(|i| (0, i))))
}

/// Boundary of the `d`-dimensional cross-polytope on `1..=2d`, antipodes
/// `(2i-1, 2i)`.
pub fn cross_polytope(d: u32) -> SimpleGraph {
    let n = 2 * d;
    let edges = (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j)));
    SimpleGraph::from_edges(1..=n, edges.filter(|&(i, j)| !(i % 2 == 1 && j == i + 1))).unwrap()
}

pub fn octahedron() -> SimpleGraph {
    cross_polytope(3)
}

/// Apex 0, upper ring 1..5, lower ring 6..10, apex 11. The `height`
/// ordering sweeps from 11 up to 0.
fn icosahedron() -> (SimpleGraph, Metadata) {
    let mut edges = Vec::new();
    for i in 1..=5u32 {
        let next = i % 5 + 1;
        edges.extend([(0, i), (i, next), (i, i + 5), (i, next + 5)]);
        edges.extend([(i + 5, next + 5), (i + 5, 11)]);
    }
    let g = SimpleGraph::from_edges(0..12, edges).unwrap();
    let height = [11, 6, 7, 8, 9, 10, 1, 2, 3, 4, 5, 0];
    let mut meta = described("icosahedron: apex 0, upper ring 1-5, lower ring 6-10, apex 11");
    meta.orderings.insert("height".into(), ranks(&height));
    (g, meta)
}

/// Two four-cycles 1-2-3-4 and 1-5-6-7 sharing vertex 1.
fn figure8() -> (SimpleGraph, Metadata) {
    let g = SimpleGraph::from_edges(
        [],
        [(1, 2), (2, 3), (3, 4), (4, 1), (1, 5), (5, 6), (6, 7), (7, 1)],
    )
    .unwrap();
    let mut meta = described("two four-cycles sharing the vertex 1");
    meta.covers.insert(
        "two_paths".into(),
        Cover::induced(vec![vec![1, 2, 3, 5, 6], vec![1, 3, 4, 6, 7]]),
    );
    meta.orderings
        .insert("center_max".into(), ranks(&[2, 3, 4, 5, 6, 7, 1]));
    (g, meta)
}

const DUNCE_HAT_EDGES: [(u32, u32); 46] = [
    (1, 2), (1, 5), (1, 6), (1, 7), (1, 9), (1, 10), (1, 12), (1, 13), (1, 14),
    (2, 4), (2, 6), (2, 10), (2, 11), (2, 15),
    (3, 5), (3, 6), (3, 8), (3, 10), (3, 11), (3, 12), (3, 13), (3, 15),
    (4, 7), (4, 8), (4, 9), (4, 11), (4, 12), (4, 13), (4, 14), (4, 15),
    (5, 8), (5, 9), (5, 11), (5, 12), (5, 14),
    (6, 13), (6, 15), (7, 9), (7, 12), (8, 9), (8, 13),
    (10, 11), (10, 13), (11, 14), (12, 15), (13, 14),
];

/// A flag triangulation of the dunce hat: 15 vertices, 46 edges, 32
/// triangles.
fn dunce_hat() -> (SimpleGraph, Metadata) {
    let g = SimpleGraph::from_edges([], DUNCE_HAT_EDGES).unwrap();
    let mut meta = described(
        "flag triangulation of the dunce hat; certificates may hold a move sequence \
         from this graph to a contractible graph",
    );
    meta.covers.insert(
        "three_collapsible".into(),
        Cover::induced(vec![
            vec![2, 4, 7, 8, 9, 11, 12, 13, 14, 15],
            vec![1, 2, 3, 6, 7, 8, 10, 11, 13, 15],
            vec![1, 3, 5, 7, 8, 9, 11, 12, 14, 15],
        ]),
    );
    (g, meta)
}

/// Triangulated 4×4 torus: `(r, c) ↦ 4r + c + 1`, neighbours along
/// `(0,1)`, `(1,0)` and `(1,1)` modulo 4.
fn torus16() -> (SimpleGraph, Metadata) {
    let id = |r: u32, c: u32| 4 * (r % 4) + c % 4 + 1;
    let mut edges = Vec::new();
    for r in 0..4 {
        for c in 0..4 {
            for (dr, dc) in [(0, 1), (1, 0), (1, 1)] {
                edges.push((id(r, c), id(r + dr, c + dc)));
            }
        }
    }
    let g = SimpleGraph::from_edges([], edges).unwrap();
    let mut meta = described("triangulated 4x4 torus, vertex (r, c) labelled 4r + c + 1");
    meta.covers.insert(
        "reference".into(),
        Cover::induced(vec![
            vec![2, 3, 4, 6, 7, 8, 10, 11, 12],
            vec![5, 6, 8, 9, 10, 11, 13, 14, 15],
            vec![1, 3, 4, 9, 11, 12, 13, 15, 16],
        ]),
    );
    let disks = TORUS_COVER.iter().map(|edges| CoverMember::spanned(edges.to_vec())).collect();
    meta.covers.insert("three_disks".into(), Cover { members: disks });
    meta.orderings.insert("morse".into(), ranks(&TORUS_MORSE));
    (g, meta)
}

/// Three contractible, non-induced subgraphs covering every vertex and edge.
const TORUS_COVER: [&[(u32, u32)]; 3] = [
    &[
        (1, 2), (1, 4), (1, 5), (1, 6), (1, 16), (2, 3), (2, 6), (2, 7), (2, 14), (3, 7),
        (3, 8), (3, 14), (4, 5), (4, 16), (5, 6), (5, 9), (5, 10), (6, 7), (6, 10), (6, 11),
        (7, 8), (7, 11), (7, 12), (8, 12), (9, 10), (9, 13), (10, 11), (10, 15), (11, 12), (11, 15),
    ],
    &[
        (1, 4), (1, 5), (1, 6), (1, 16), (2, 3), (2, 7), (2, 13), (2, 14), (3, 4), (3, 7),
        (3, 8), (3, 14), (4, 5), (4, 8), (4, 16), (5, 6), (5, 8), (5, 9), (5, 10), (6, 10),
        (7, 8), (7, 11), (7, 12), (8, 9), (8, 12), (9, 10), (9, 12), (10, 15), (11, 12), (13, 14),
    ],
    &[
        (1, 4), (1, 5), (1, 6), (1, 13), (1, 16), (2, 3), (2, 14), (3, 4), (3, 8), (3, 14),
        (3, 15), (4, 5), (4, 8), (4, 15), (4, 16), (5, 6), (5, 8), (6, 7), (9, 10), (9, 14),
        (10, 11), (10, 14), (10, 15), (11, 12), (11, 15), (11, 16), (12, 13), (12, 16), (13, 16), (14, 15),
        (15, 16),
    ],
];

/// Lowest to highest; one minimum, two saddles, one maximum.
const TORUS_MORSE: [u32; 16] = [11, 7, 8, 4, 10, 3, 6, 5, 12, 16, 2, 9, 1, 15, 13, 14];

/// Vertex → 1-based rank map for an ordering listed from lowest to highest.
fn ranks(order: &[u32]) -> Value {
    let m: BTreeMap<String, Value> = order
        .iter()
        .enumerate()
        .map(|(r, v)| (v.to_string(), json!(r + 1)))
        .collect();
    json!(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::fvector;

    #[test]
    fn counts() {
        assert_eq!(fvector(&octahedron()), vec![6, 12, 8]);
        assert_eq!(fvector(&cross_polytope(4)), vec![8, 24, 32, 16]);
        assert_eq!(fvector(&fixture("icosahedron").unwrap()), vec![12, 30, 20]);
        assert_eq!(fvector(&fixture("dunce_hat").unwrap()), vec![15, 46, 32]);
        assert_eq!(fvector(&fixture("torus16").unwrap()), vec![16, 48, 32]);
        assert_eq!(fvector(&fixture("figure8").unwrap()), vec![7, 8]);
        assert_eq!(fixture("wheel_5").unwrap().size(), 10);
        assert_eq!(fixture("star_3").unwrap().order(), 4);
        assert_eq!(fixture("discrete_4").unwrap().size(), 0);
    }

    #[test]
    fn attached_covers_are_valid() {
        use crate::category::{verify_cover, CoverMode};
        use crate::homotopy::Budget;
        for (name, cover) in [("torus16", "three_disks"), ("dunce_hat", "three_collapsible"), ("figure8", "two_paths")] {
            let doc = document(name).unwrap();
            let v = verify_cover(&doc.graph, &doc.metadata.covers[cover], CoverMode::InItself, &Budget::default()).unwrap();
            assert!(v.valid, "{name}/{cover}");
        }
    }

    #[test]
    fn unknown_names() {
        for bad in ["cube", "cycle_x", "cycle_2", "blob_3"] {
            assert!(document(bad).is_err(), "{bad}");
        }
    }
}
