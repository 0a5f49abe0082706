//! Resolving graph, ordering and cover arguments.

use std::io::Read;
use std::path::Path;

use graphtop::category::Cover;
use graphtop::fixtures::document;
use graphtop::io::{parse, read_file, Format, GraphDocument};
use graphtop::morse::OrderingFunction;
use graphtop::{Error, Result};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

/// `fixture:NAME`, `-` for an edge list on standard input, or a file path
/// whose extension picks the format.
pub fn load_graph(spec: &str) -> Result<GraphDocument> {
    if let Some(name) = spec.strip_prefix("fixture:") {
        return document(name);
    }
    if spec == "-" {
        let mut text = String::new();
        std::io::stdin().read_to_string(&mut text)?;
        return parse(&text, Format::EdgeList);
    }
    let path = Path::new(spec);
    if !path.is_file() {
        return Err(Error::Document(format!("no such file `{spec}`")));
    }
    read_file(path)
}

/// `random:SEED`, `named:NAME` for an ordering stored with the graph, or a
/// JSON file holding either a vertex → value object or a list of vertices
/// from lowest to highest.
pub fn load_ordering(spec: &str, doc: &GraphDocument) -> Result<OrderingFunction> {
    let g = &doc.graph;
    if let Some(seed) = spec.strip_prefix("random:") {
        let seed: u64 = seed
            .parse()
            .map_err(|_| Error::InvalidOrdering(format!("bad seed `{seed}`")))?;
        let mut order = g.labels().to_vec();
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        return OrderingFunction::from_order(g, order);
    }
    if let Some(name) = spec.strip_prefix("named:") {
        let v = doc
            .metadata
            .orderings
            .get(name)
            .ok_or_else(|| Error::InvalidOrdering(format!("no ordering named `{name}`")))?;
        return OrderingFunction::from_json(g, v);
    }
    let v: Value = serde_json::from_str(&std::fs::read_to_string(spec)?)?;
    ordering_from_value(g, &v)
}

fn ordering_from_value(g: &graphtop::SimpleGraph, v: &Value) -> Result<OrderingFunction> {
    match v {
        Value::Array(items) => {
            let order = items
                .iter()
                .map(|x| {
                    x.as_u64()
                        .and_then(|x| u32::try_from(x).ok())
                        .ok_or_else(|| Error::InvalidOrdering(format!("`{x}` is not a vertex")))
                })
                .collect::<Result<Vec<u32>>>()?;
            OrderingFunction::from_order(g, order)
        }
        _ => OrderingFunction::from_json(g, v),
    }
}

/// `named:NAME` for a cover stored with the graph, or a JSON file.
pub fn load_cover(spec: &str, doc: &GraphDocument) -> Result<Cover> {
    if let Some(name) = spec.strip_prefix("named:") {
        return doc
            .metadata
            .covers
            .get(name)
            .cloned()
            .ok_or_else(|| Error::InvalidCover(format!("no cover named `{name}`")));
    }
    Ok(serde_json::from_str(&std::fs::read_to_string(spec)?)?)
}
