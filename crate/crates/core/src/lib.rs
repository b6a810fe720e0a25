//! Word-representability of graphs.
//!
//! A graph is word-representable exactly when it admits a semi-transitive
//! orientation. This crate builds simplified de Bruijn graphs, three-colors
//! the binary ones, decides semi-transitivity by branching and propagation
//! (emitting a checkable proof trace on failure), verifies such traces, and
//! locates induced subgraphs.

pub mod coloring;
pub mod debruijn;
pub mod graph;
pub mod orientation;
pub mod solver;
pub mod subiso;
pub mod trace;
pub mod words;

pub use coloring::{classify_binary_vertex, color_s_n_2, exact_chromatic_number, Color};
pub use debruijn::{DeBruijnDigraph, SimplifiedDeBruijnGraph};
pub use graph::{ColorAssignment, GraphError, LabeledGraph, VertexId};
pub use orientation::{
    brute_force_semitransitive, find_shortcut, is_acyclic, is_semitransitive, Arc, OracleVerdict,
    Orientation, PartialOrientation,
};
pub use solver::{solve, SolverConfig, Verdict};
pub use subiso::{contains_induced, find_induced_embedding, Embedding};
pub use trace::{emit_trace, extract_graph, parse_trace, verify_trace, ProofTrace};
pub use words::{find_uniform_representant, represents, Word};
