//! Unary inputs: the `1^e` reachability solver, sweep decomposition, and
//! evaluation from prime-factored lengths.

mod compress;
mod rho;
mod solver;
mod translate;

use thiserror::Error;

use crate::automaton::StateId;
use crate::builder::BuildError;
use crate::codecs::CodecError;

pub use compress::{compress_unary_afa, CompressionReport, FlatEmission, UnaryCompression};
pub use rho::{
    explicit_sweep, rho_decompose, sweep_state_after_unary, RhoDecomposition, RhoEnd, SweepTable,
};
pub use solver::build_unary_3dstcon_solver;
pub use translate::graph_binary_to_prime;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UnaryError {
    #[error("wrong machine shape: {0}")]
    Shape(String),
    #[error("state {state} has several moves on {symbol}")]
    Nondeterministic { state: StateId, symbol: String },
    #[error("no state {0}")]
    State(StateId),
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error(transparent)]
    Build(#[from] BuildError),
}
