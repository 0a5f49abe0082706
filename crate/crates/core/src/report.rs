//! The combined invariant report.

use std::time::Instant;

use serde::Serialize;

use crate::canon::certificate;
use crate::category::{cat_bracket, cri_bracket, tcat_bracket, CategoryBracket, CategoryOptions};
use crate::cohomology::{poincare_polynomial, trim_betti, CohomologyBasis, CupLength};
use crate::complex::{euler_characteristic, fvector};
use crate::homotopy::{Budget, Collapser, HomotopyCertificate};
use crate::io::GraphDocument;
use crate::morse::{crit_exact, crit_upper, OrderingFunction};

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InputDescriptor {
    /// As given on the command line: `fixture:NAME`, a path or `-`.
    pub source: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub order: usize,
    pub size: usize,
    /// Canonical certificate in hex; equal exactly for isomorphic graphs.
    pub certificate: String,
}

/// `crit`, tagged with how it was obtained.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CritValue {
    /// Minimum over all orderings, by subset dynamic programming.
    Exact { value: usize, ordering: OrderingFunction },
    /// Best of random greedy orderings; not a proven minimum.
    UpperBound { value: usize, ordering: OrderingFunction },
}

impl CritValue {
    pub fn value(&self) -> usize {
        match self {
            CritValue::Exact { value, .. } | CritValue::UpperBound { value, .. } => *value,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, CritValue::Exact { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportSettings {
    pub seed: u64,
    pub dp_limit: usize,
    pub budget: Budget,
    pub homotopy_states: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InvariantReport {
    pub schema_version: u32,
    pub tool_version: String,
    pub input: InputDescriptor,
    pub fvector: Vec<usize>,
    pub euler: i64,
    pub betti: Vec<usize>,
    pub poincare: String,
    pub cup: CupLength,
    pub crit: CritValue,
    pub contractible: bool,
    pub tcat: CategoryBracket,
    pub cat: CategoryBracket,
    pub cri: CategoryBracket,
    pub settings: ReportSettings,
    /// Wall-clock milliseconds; only filled on request since it breaks
    /// byte-stable output.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u128>,
}

/// Computes every invariant of the document's graph. Covers and
/// certificates in the metadata are offered to the category brackets.
pub fn invariant_report(source: &str, doc: &GraphDocument, opts: &CategoryOptions, timing: bool) -> InvariantReport {
    let start = Instant::now();
    let g = &doc.graph;
    let mut opts = opts.clone();
    opts.covers.extend(doc.metadata.covers.values().cloned());
    opts.certificates.extend(doc.metadata.certificates.values().map(|moves| HomotopyCertificate {
        start: g.clone(),
        moves: moves.clone(),
        marked: None,
    }));

    let basis = CohomologyBasis::new(g);
    let betti = trim_betti(&basis.betti());
    let cup = basis.cup_length(opts.max_products);
    let crit = match crit_exact(g, opts.dp_limit) {
        Ok((value, ordering)) => CritValue::Exact { value, ordering },
        Err(_) => {
            let (value, ordering) = crit_upper(g, opts.heuristic_restarts, opts.seed);
            CritValue::UpperBound { value, ordering }
        }
    };
    let f = fvector(g);
    InvariantReport {
        schema_version: SCHEMA_VERSION,
        tool_version: TOOL_VERSION.to_string(),
        input: InputDescriptor {
            source: source.to_string(),
            name: doc.metadata.name.clone(),
            order: g.order(),
            size: g.size(),
            certificate: certificate(g).to_hex(),
        },
        poincare: poincare_polynomial(&betti),
        fvector: f,
        euler: euler_characteristic(g),
        betti,
        cup,
        crit,
        contractible: g.order() > 0 && Collapser::new(g).contractible(g.full_mask()),
        tcat: tcat_bracket(g, &opts),
        cat: cat_bracket(g, &opts),
        cri: cri_bracket(g, &opts),
        settings: ReportSettings {
            seed: opts.seed,
            dp_limit: opts.dp_limit,
            budget: opts.budget,
            homotopy_states: opts.homotopy_states,
        },
        elapsed_ms: timing.then(|| start.elapsed().as_millis()),
    }
}
