//! Contractibility, elementary homotopy moves and homotopy search.

pub mod contract;
pub mod moves;
pub mod search;

pub use contract::{
    contraction_witness, is_contractible, removable_vertices, CollapseStats, Collapser,
    ContractibilityCache,
};
pub use moves::{apply_move, check_move, verify_certificate, CertificateOutcome, HomotopyCertificate, Move};
pub use search::{
    contractible_in, distinguish, homotopic_bounded, legal_moves, reduce, Budget, DistinctWitness,
    InHostVerdict, Verdict,
};
