//! Connected graphs of small order up to isomorphism, sorted into homotopy
//! classes.
//!
//! Graphs are first partitioned by Euler characteristic, Betti vector and
//! cup length; different cells are homotopically distinct. Inside a cell,
//! graphs with isomorphic reductions are linked at once, and the remaining
//! reductions are linked by bounded homotopy search. The number of homotopy
//! types is exact when every cell collapses to a single class.

use std::collections::{BTreeMap, HashMap, HashSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::canon::{canonical_graph, certificate, Certificate};
use crate::cohomology::{betti, trim_betti, CohomologyBasis, DEFAULT_MAX_PRODUCTS};
use crate::complex::{euler_characteristic, fvector};
use crate::error::{Error, Result};
use crate::graph::SimpleGraph;
use crate::homotopy::{homotopic_bounded, reduce, Budget, Collapser, HomotopyCertificate, Verdict};
use crate::io::to_graph6;
use crate::morse::{crit_exact, DEFAULT_DP_LIMIT};

pub const MAX_ORDER: usize = 8;

/// One canonical representative per isomorphism class of connected graphs
/// on `n` vertices, sorted by certificate. Built by attaching a new vertex
/// to every non-empty subset of every graph of order `n - 1`: removing a
/// non-cut vertex (one always exists) shows nothing is missed.
pub fn enumerate_connected(n: usize) -> Result<Vec<SimpleGraph>> {
    if n > MAX_ORDER {
        return Err(Error::OverLimit {
            what: "census order",
            size: n,
            limit: MAX_ORDER,
        });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut level = vec![SimpleGraph::discrete([0]).unwrap()];
    for k in 1..n {
        let found: Vec<(Certificate, SimpleGraph)> = level
            .par_iter()
            .flat_map_iter(|g| {
                (1u64..1 << k).map(move |sub| {
                    let h = g.with_vertex(k as u32, &g.labels_of(sub)).unwrap();
                    (certificate(&h), h)
                })
            })
            .collect();
        let mut seen = HashSet::new();
        let mut next: Vec<(Certificate, SimpleGraph)> = found
            .into_iter()
            .filter(|(c, _)| seen.insert(c.clone()))
            .collect();
        next.sort_by(|a, b| a.0.cmp(&b.0));
        level = next.into_iter().map(|(_, g)| canonical_graph(&g)).collect();
    }
    Ok(level)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Confidence {
    /// Alone in its invariant cell.
    ProvenDistinct,
    /// Linked by certificates to every graph of its cell.
    ProvenEquivalent,
    Unresolved,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CellKey {
    pub euler: i64,
    pub betti: Vec<usize>,
    pub cup: (usize, usize),
}

#[derive(Clone, Debug, Serialize)]
pub struct CensusRecord {
    pub certificate: String,
    pub graph6: String,
    pub fvector: Vec<usize>,
    pub euler: i64,
    pub betti: Vec<usize>,
    pub cup: (usize, usize),
    pub crit: usize,
    pub contractible: bool,
    /// Graph6 of the greedy reduction.
    pub core: String,
    pub class: usize,
    pub confidence: Confidence,
}

/// A homotopy class inside a cell: its reduction cores, each linked to the
/// first one by a certificate.
#[derive(Clone, Debug, Serialize)]
pub struct HomotopyClass {
    pub id: usize,
    pub representative: String,
    pub members: usize,
    pub links: Vec<HomotopyCertificate>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Cell {
    pub key: CellKey,
    pub classes: Vec<HomotopyClass>,
    /// Core pairs left undecided by the search.
    pub unresolved_pairs: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct CensusReport {
    pub order: usize,
    pub graphs: usize,
    /// Proven lower bound on the number of homotopy types: the number of cells.
    pub types_lower: usize,
    /// Upper bound: the number of classes after linking.
    pub types_upper: usize,
    pub cells: Vec<Cell>,
    pub records: Vec<CensusRecord>,
}

impl CensusReport {
    pub fn homotopy_types(&self) -> Option<usize> {
        (self.types_lower == self.types_upper).then_some(self.types_lower)
    }
}

struct Prepared {
    graph: SimpleGraph,
    key: CellKey,
    fvector: Vec<usize>,
    crit: usize,
    contractible: bool,
    core: SimpleGraph,
    core_cert: Certificate,
}

fn prepare(g: SimpleGraph) -> Prepared {
    let cup = CohomologyBasis::new(&g).cup_length(DEFAULT_MAX_PRODUCTS);
    let key = CellKey {
        euler: euler_characteristic(&g),
        betti: trim_betti(&betti(&g)),
        cup: (cup.lower, cup.upper),
    };
    let crit = crit_exact(&g, DEFAULT_DP_LIMIT).expect("census orders fit the DP").0;
    let contractible = Collapser::new(&g).contractible(g.full_mask());
    let (core, _) = reduce(&g);
    let core = canonical_graph(&core);
    Prepared {
        fvector: fvector(&g),
        core_cert: certificate(&core),
        graph: g,
        key,
        crit,
        contractible,
        core,
    }
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

/// Links the distinct cores of one cell. Returns the class index of every
/// core, the linking certificates per class and the undecided pair count.
fn link_cores(cores: &[SimpleGraph], budget: &Budget) -> (Vec<usize>, Vec<Vec<HomotopyCertificate>>, usize) {
    let k = cores.len();
    let mut parent: Vec<usize> = (0..k).collect();
    let mut links: Vec<Option<HomotopyCertificate>> = vec![None; k];
    let mut unresolved = 0;
    // Each core is compared with the root of every class found so far.
    let mut roots: Vec<usize> = Vec::new();
    for i in 0..k {
        let mut joined = false;
        for &r in &roots {
            match homotopic_bounded(&cores[r], &cores[i], budget) {
                Verdict::Equivalent(cert) => {
                    parent[i] = r;
                    links[i] = Some(cert);
                    joined = true;
                    break;
                }
                Verdict::Distinct(_) => {}
                Verdict::Unknown { .. } => unresolved += 1,
            }
        }
        if !joined {
            roots.push(i);
        }
    }
    let mut class_of_root = HashMap::new();
    let mut class = vec![0; k];
    let mut class_links = Vec::new();
    for i in 0..k {
        let r = find(&mut parent, i);
        let c = *class_of_root.entry(r).or_insert_with(|| {
            class_links.push(Vec::new());
            class_links.len() - 1
        });
        class[i] = c;
        if let Some(l) = links[i].take() {
            class_links[c].push(l);
        }
    }
    (class, class_links, unresolved)
}

/// Full census of connected graphs of order `n`.
pub fn classify_homotopy(n: usize, budget: &Budget) -> Result<CensusReport> {
    let graphs = enumerate_connected(n)?;
    let prepared: Vec<Prepared> = graphs.into_par_iter().map(prepare).collect();
    let mut cells: BTreeMap<CellKey, Vec<usize>> = BTreeMap::new();
    for (i, p) in prepared.iter().enumerate() {
        cells.entry(p.key.clone()).or_default().push(i);
    }
    let cell_list: Vec<(CellKey, Vec<usize>)> = cells.into_iter().collect();
    let linked: Vec<_> = cell_list
        .par_iter()
        .map(|(_, members)| {
            let mut cores: Vec<(Certificate, SimpleGraph)> = members
                .iter()
                .map(|&i| (prepared[i].core_cert.clone(), prepared[i].core.clone()))
                .collect();
            // Smallest cores first: they make the cheapest search roots.
            cores.sort_by(|a, b| (a.1.order(), &a.0).cmp(&(b.1.order(), &b.0)));
            cores.dedup_by(|a, b| a.0 == b.0);
            let graphs: Vec<SimpleGraph> = cores.iter().map(|c| c.1.clone()).collect();
            let (class, links, unresolved) = link_cores(&graphs, budget);
            let index: HashMap<Certificate, usize> =
                cores.iter().enumerate().map(|(j, c)| (c.0.clone(), class[j])).collect();
            (graphs, class, links, unresolved, index)
        })
        .collect();

    let mut records: Vec<Option<CensusRecord>> = vec![None; prepared.len()];
    let mut out_cells = Vec::new();
    let mut next_id = 0;
    let mut upper = 0;
    for ((key, members), (cores, class, links, unresolved, index)) in cell_list.into_iter().zip(linked) {
        let nclasses = links.len();
        upper += nclasses;
        let confidence = if members.len() == 1 {
            Confidence::ProvenDistinct
        } else if nclasses == 1 {
            Confidence::ProvenEquivalent
        } else {
            Confidence::Unresolved
        };
        let mut counts = vec![0; nclasses];
        for &i in &members {
            let p = &prepared[i];
            let c = index[&p.core_cert];
            counts[c] += 1;
            records[i] = Some(CensusRecord {
                certificate: certificate(&p.graph).to_hex(),
                graph6: to_graph6(&p.graph),
                fvector: p.fvector.clone(),
                euler: p.key.euler,
                betti: p.key.betti.clone(),
                cup: p.key.cup,
                crit: p.crit,
                contractible: p.contractible,
                core: to_graph6(&p.core),
                class: next_id + c,
                confidence,
            });
        }
        let classes = links
            .into_iter()
            .enumerate()
            .map(|(c, l)| HomotopyClass {
                id: next_id + c,
                representative: to_graph6(&cores[class.iter().position(|&x| x == c).unwrap()]),
                members: counts[c],
                links: l,
            })
            .collect();
        next_id += nclasses;
        out_cells.push(Cell {
            key,
            classes,
            unresolved_pairs: unresolved,
        });
    }
    Ok(CensusReport {
        order: n,
        graphs: prepared.len(),
        types_lower: out_cells.len(),
        types_upper: upper,
        cells: out_cells,
        records: records.into_iter().map(Option::unwrap).collect(),
    })
}
