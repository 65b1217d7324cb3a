//! Exact construction and verification of r-factorizations of complete
//! h-uniform hypergraphs via amalgamation and detachment: from-scratch
//! factorization (Baranyai-type), extension of partial r-factorizations of
//! `K_m^h` for h = 4 and h = 5 (experimental for other h), extension of
//! mixed-edge-size colorings of `K_n^h - V`, and P-friendly extension for
//! `K_n^h \ V`; plus exhaustive tiny-scale oracles and a text format.

pub mod binom;
pub mod coloring;
pub mod detach;
pub mod edge;
pub mod error;
pub mod extend;
pub mod flow;
pub mod hf;
pub mod hypergraph;
pub mod oracle;
pub mod params;
pub mod sample;
pub mod verify;

pub use binom::{binom, identity_checks};
pub use coloring::{Coloring, HostKind, PartialFact};
pub use detach::{detach, AmalgamColoring, DetachPlan};
pub use edge::{Edge, VertexId};
pub use error::{Error, Result};
pub use extend::{
    extend_generic, extend_k4, extend_k5, extend_outside, extend_pieces, factorize,
    ExtendResult, GenericOutcome, StageLog,
};
pub use hf::{format_hf, parse_hf, read_hf, write_hf};
pub use hypergraph::{amalgamate, complete, restrict, shrink, MultiHypergraph};
pub use oracle::{oracle_detach, oracle_extend, SearchConfig, SearchOutcome};
pub use params::Params;
pub use sample::random_partial;
pub use verify::{
    check_conditions, check_full, check_p_friendly, check_partial, check_pieces_conditions,
    type_profile, TypeProfile, VerifyReport,
};
