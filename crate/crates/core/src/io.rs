//! Edge-list, graph6 and JSON graph formats.
//!
//! Edge lists hold one `u v` pair per line; a line with a single id declares
//! an isolated vertex and `#` starts a comment. Output is normalised to
//! labels `0..n` in ascending order of the input labels. graph6 follows the
//! standard bit-packed layout (upper triangle, column by column) with the
//! `>>graph6<<` header optional. JSON documents are the plain graph object
//! plus an optional `metadata` object carrying covers, orderings and move
//! certificates.

use std::collections::{BTreeMap, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::bits::bit;
use crate::category::Cover;
use crate::error::{Error, Result};
use crate::graph::{SimpleGraph, MAX_VERTICES};
use crate::homotopy::Move;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    EdgeList,
    Graph6,
    Json,
}

impl Format {
    /// Guesses the format from a file extension; anything unknown is an edge list.
    pub fn from_path(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some("json") => Format::Json,
            Some("g6" | "graph6") => Format::Graph6,
            _ => Format::EdgeList,
        }
    }
}

pub fn parse_edge_list(text: &str) -> Result<SimpleGraph> {
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    let mut seen = HashSet::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let err = |msg: String| Error::EdgeList { line, msg };
        let body = raw.split('#').next().unwrap_or("");
        let toks: Vec<&str> = body.split_whitespace().collect();
        let ids = toks
            .iter()
            .map(|t| t.parse::<u32>().map_err(|_| err(format!("`{t}` is not a vertex id"))))
            .collect::<Result<Vec<u32>>>()?;
        match ids[..] {
            [] => {}
            [v] => vertices.push(v),
            [u, v] => {
                if u == v {
                    return Err(err(format!("self-loop at vertex {u}")));
                }
                if !seen.insert((u.min(v), u.max(v))) {
                    return Err(err(format!("duplicate edge {u} {v}")));
                }
                edges.push((u, v));
            }
            _ => return Err(err(format!("expected `u v`, found {} ids", ids.len()))),
        }
    }
    SimpleGraph::from_edges(vertices, edges)
}

/// Normalised edge list: edges by ascending index pair, then isolated vertices.
pub fn to_edge_list(g: &SimpleGraph) -> String {
    let mut out = String::new();
    for (i, j) in g.edge_indices() {
        out.push_str(&format!("{i} {j}\n"));
    }
    for i in 0..g.order() {
        if g.adj(i) == 0 {
            out.push_str(&format!("{i}\n"));
        }
    }
    out
}

const G6_HEADER: &str = ">>graph6<<";

/// Decodes one graph6 line; vertices are labelled `0..n`.
pub fn parse_graph6(text: &str) -> Result<SimpleGraph> {
    let mut s = text.trim_end_matches(['\n', '\r']);
    let mut offset = 0;
    if let Some(rest) = s.strip_prefix(G6_HEADER) {
        s = rest;
        offset = G6_HEADER.len();
    }
    let bytes = s.as_bytes();
    let err = |at: usize, msg: &str| Error::Graph6 {
        offset: offset + at,
        msg: msg.to_string(),
    };
    for (k, &b) in bytes.iter().enumerate() {
        if !(63..=126).contains(&b) {
            return Err(err(k, "byte outside the printable range 63..=126"));
        }
    }
    let (n, start) = match bytes.first() {
        None => return Err(err(0, "empty input")),
        Some(126) => {
            if bytes.get(1) == Some(&126) {
                return Err(err(1, "orders above 258047 are not supported"));
            }
            if bytes.len() < 4 {
                return Err(err(bytes.len(), "truncated order field"));
            }
            let n = bytes[1..4]
                .iter()
                .fold(0usize, |a, &b| a << 6 | (b - 63) as usize);
            (n, 4)
        }
        Some(&b) => ((b - 63) as usize, 1),
    };
    if n > MAX_VERTICES {
        return Err(Error::TooManyVertices(n));
    }
    let pairs = n * n.saturating_sub(1) / 2;
    let need = pairs.div_ceil(6);
    let body = &bytes[start..];
    if body.len() != need {
        return Err(err(
            start + body.len().min(need),
            &format!("expected {need} data bytes for {n} vertices, found {}", body.len()),
        ));
    }
    let mut adj = vec![0u64; n];
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if (body[k / 6] - 63) >> (5 - k % 6) & 1 == 1 {
                adj[i] |= bit(j);
                adj[j] |= bit(i);
            }
            k += 1;
        }
    }
    if k % 6 != 0 && (body[k / 6] - 63) & ((1 << (6 - k % 6)) - 1) != 0 {
        return Err(err(start + k / 6, "padding bits are not zero"));
    }
    Ok(SimpleGraph::from_parts((0..n as u32).collect(), adj))
}

/// graph6 encoding (no header) of the graph on its index order.
pub fn to_graph6(g: &SimpleGraph) -> String {
    let n = g.order();
    let mut out = Vec::new();
    if n <= 62 {
        out.push(n as u8 + 63);
    } else {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    }
    let mut acc = 0u8;
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            acc = acc << 1 | (g.adj(i) >> j & 1) as u8;
            k += 1;
            if k % 6 == 0 {
                out.push(acc + 63);
                acc = 0;
            }
        }
    }
    if k % 6 != 0 {
        out.push((acc << (6 - k % 6)) + 63);
    }
    String::from_utf8(out).expect("graph6 is ASCII")
}

/// Optional data shipped with a graph.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub covers: BTreeMap<String, Cover>,
    /// Orderings as vertex → rank (or value) maps.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub orderings: BTreeMap<String, Value>,
    /// Move sequences starting from this graph.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub certificates: BTreeMap<String, Vec<Move>>,
}

impl Metadata {
    pub fn is_empty(&self) -> bool {
        *self == Metadata::default()
    }
}

/// A graph with its metadata, as read from or written to JSON.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct GraphDocument {
    pub graph: SimpleGraph,
    pub metadata: Metadata,
}

#[derive(Serialize, Deserialize)]
struct DocRepr {
    vertices: Vec<u32>,
    edges: Vec<(u32, u32)>,
    #[serde(default, skip_serializing_if = "Metadata::is_empty")]
    metadata: Metadata,
}

pub fn parse_json(text: &str) -> Result<GraphDocument> {
    let r: DocRepr = serde_json::from_str(text)?;
    let listed: HashSet<u32> = r.vertices.iter().copied().collect();
    if listed.len() != r.vertices.len() {
        return Err(Error::Document("vertex listed twice".into()));
    }
    let mut seen = HashSet::new();
    for (k, &(u, v)) in r.edges.iter().enumerate() {
        let at = |m: String| Error::Document(format!("edge #{k}: {m}"));
        if u == v {
            return Err(at(format!("self-loop at vertex {u}")));
        }
        for w in [u, v] {
            if !listed.contains(&w) {
                return Err(at(format!("vertex {w} is not listed")));
            }
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(at(format!("duplicate edge {u} {v}")));
        }
    }
    Ok(GraphDocument {
        graph: SimpleGraph::from_edges(r.vertices, r.edges)?,
        metadata: r.metadata,
    })
}

pub fn to_json(doc: &GraphDocument) -> String {
    let r = DocRepr {
        vertices: doc.graph.labels().to_vec(),
        edges: doc.graph.edges(),
        metadata: doc.metadata.clone(),
    };
    serde_json::to_string_pretty(&r).expect("graph documents serialise")
}

pub fn parse(text: &str, format: Format) -> Result<GraphDocument> {
    match format {
        Format::Json => parse_json(text),
        Format::Graph6 => {
            let line = text
                .lines()
                .find(|l| !l.trim().is_empty())
                .ok_or_else(|| Error::Graph6 {
                    offset: 0,
                    msg: "empty input".into(),
                })?;
            Ok(GraphDocument {
                graph: parse_graph6(line)?,
                metadata: Metadata::default(),
            })
        }
        Format::EdgeList => Ok(GraphDocument {
            graph: parse_edge_list(text)?,
            metadata: Metadata::default(),
        }),
    }
}

pub fn read_file(path: &Path) -> Result<GraphDocument> {
    parse(&std::fs::read_to_string(path)?, Format::from_path(path))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_list_round_trip() {
        let s = "0 1\n0 3\n1 2\n4\n";
        let g = parse_edge_list(s).unwrap();
        assert_eq!(to_edge_list(&g), s);
        let g = parse_edge_list("# one-based\n1 2\n2 3 # tail\n\n7\n").unwrap();
        assert_eq!(to_edge_list(&g.normalized()), "0 1\n1 2\n3\n");
    }

    #[test]
    fn edge_list_errors_carry_lines() {
        let e = parse_edge_list("1 2\n2 x\n").unwrap_err();
        assert!(matches!(e, Error::EdgeList { line: 2, .. }));
        let e = parse_edge_list("1 2\n\n2 1\n").unwrap_err();
        assert!(matches!(e, Error::EdgeList { line: 3, .. }), "{e}");
        let e = parse_edge_list("3 3\n").unwrap_err();
        assert!(e.to_string().contains("self-loop"));
        assert!(parse_edge_list("1 2 3\n").is_err());
    }

    #[test]
    fn graph6_known_strings() {
        let c5 = SimpleGraph::from_index_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        assert_eq!(to_graph6(&c5), "Dhc");
        let g = SimpleGraph::from_index_edges(5, &[(0, 1), (0, 2), (2, 4), (3, 4)]).unwrap();
        assert_eq!(to_graph6(&g), "DoK");
        assert_eq!(parse_graph6(">>graph6<<DoK\n").unwrap(), g);
        let edges: Vec<(usize, usize)> = (0..64).flat_map(|i| (i + 1..64).map(move |j| (i, j))).collect();
        let k64 = SimpleGraph::from_index_edges(64, &edges).unwrap();
        let s = to_graph6(&k64);
        assert!(s.starts_with("~?@?~~"));
        assert_eq!(parse_graph6(&s).unwrap(), k64);
    }

    #[test]
    fn graph6_errors_carry_offsets() {
        match parse_graph6("Dh").unwrap_err() {
            Error::Graph6 { offset, .. } => assert_eq!(offset, 2),
            e => panic!("{e}"),
        }
        match parse_graph6(">>graph6<<D h").unwrap_err() {
            Error::Graph6 { offset, .. } => assert_eq!(offset, 11),
            e => panic!("{e}"),
        }
        assert!(parse_graph6("Dhd").is_err());
    }

    #[test]
    fn json_documents() {
        let text = r#"{"vertices":[1,2,3],"edges":[[1,2],[2,3]],
            "metadata":{"covers":{"pair":[{"vertices":[1,2]},{"vertices":[2,3]}]},
                        "orderings":{"up":{"1":1,"2":2,"3":3}}}}"#;
        let doc = parse_json(text).unwrap();
        assert_eq!(doc.graph.size(), 2);
        assert_eq!(doc.metadata.covers["pair"].len(), 2);
        assert_eq!(parse_json(&to_json(&doc)).unwrap(), doc);
        let e = parse_json(r#"{"vertices":[1,2],"edges":[[1,2],[2,1]]}"#).unwrap_err();
        assert!(e.to_string().contains("edge #1"));
        assert!(parse_json(r#"{"vertices":[1],"edges":[[1,2]]}"#).is_err());
    }
}
