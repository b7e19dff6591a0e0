//! Two-way finite automata workbench.
//!
//! Machines ([`TwoWayAutomaton`]), their evaluators, the string encodings of
//! graphs and machines, reachability automata and reductions, narrow
//! alternating simulations of space-bounded Turing machines, and sweep
//! compression for unary inputs. The [`oracle`] module holds brute-force
//! reference implementations that share no code with the evaluators.

pub mod automaton;
pub mod builder;
pub mod codecs;
pub mod compose;
pub mod config;
pub mod dtm;
pub mod error;
pub mod eval;
pub mod graph;
pub mod manifest;
pub mod oracle;
pub mod pipeline;
pub mod reductions;
pub mod report;
pub mod stationary;
pub mod unary;

pub use automaton::{
    validate_automaton, AutomatonBuilder, AutomatonParts, Geometry, Move, Quantifier, StateId,
    StateKind, StructuralReport, Symbol, TwoWayAutomaton,
};
pub use error::Error;
pub use eval::{
    accepts_afa_fixpoint, accepts_nfa, evaluate_leveled, measure_narrowness, step_successors,
    ComputationGraph, NfaVerdict, SurfaceConfig,
};
pub use graph::Digraph3;
pub use reductions::{build_3dstcon_solver, build_graph_validator, nfa_to_graph, ReductionError};
pub use dtm::{dtm_to_narrow_afa, dtm_to_sweeping_transducer, ResourceBounds, SpaceBoundedDtm};
pub use unary::{
    build_unary_3dstcon_solver, compress_unary_afa, graph_binary_to_prime, rho_decompose,
    sweep_state_after_unary, RhoDecomposition, UnaryError,
};
pub use codecs::{CodecError, UnaryWord};
pub use pipeline::{run_pipeline, PipelineSpec};
pub use manifest::ExperimentManifest;
pub use report::report_state_complexity;
