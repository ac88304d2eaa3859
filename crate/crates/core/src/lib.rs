//! Reconfiguration problem instances, exact bottleneck solvers, and the
//! gap-preserving reductions between them: verifier amplification along
//! expander walks, the squared-alphabet FGLSS graph, and the label cover to
//! set cover and hypergraph vertex cover constructions.

pub mod amplify;
pub mod approx;
pub mod checks;
pub mod error;
pub mod fglss;
pub mod generate;
pub mod instance;
pub mod pipeline;
pub mod io;
pub mod rational;
pub mod reduce;
pub mod seed;
pub mod sequence;
pub mod solve;
pub mod verifier;

pub use error::{Error, Result};
pub use instance::{
    normalize_self_loops, satisfies_multi, satisfies_partial, ConstraintGraph, Cover, Hypergraph,
    MultiAssignment, PartialAssignment, SetSystem, Symbol,
};
pub use rational::{format_rational, parse_rational, Rational};
pub use sequence::{validate_sequence, InstanceRef, ReconfigSequence, Validation};
pub use solve::SolveResult;
pub use verifier::{Proof, TableVerifier};
