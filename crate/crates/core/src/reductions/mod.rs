//! Binary-world constructions: the encoding validator, the reachability
//! solver, unique-accept normalization and the 2NFA-to-graph reduction.

mod nfa_to_graph;
mod normalize;
mod solver;
mod stream;
mod validator;

pub use nfa_to_graph::{
    label_audit, legalize_indegree, nfa_to_graph, sweep_map, LabelAudit, ReductionError,
    ReductionOutput, VertexLabel, solver_instance,
};
pub use normalize::{is_unique_accept_normal, normalize_unique_accept};
pub use solver::{build_3dstcon_core, build_3dstcon_solver};
pub use validator::build_graph_validator;
