//! Instance representations for the five reconfiguration problems.

mod assignment;
mod cover;
mod graph;

pub use assignment::{
    hamming, multi_edge_ok, normalize_self_loops, satisfies_multi, satisfies_partial, MultiAssignment,
    PartialAssignment,
};
pub use cover::{Cover, Hypergraph, Incidence, SetSystem};
pub use graph::{equality_table, ConstraintGraph, Symbol};
