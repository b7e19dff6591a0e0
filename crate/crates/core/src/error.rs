use thiserror::Error;

use crate::automaton::ValidationError;
use crate::builder::BuildError;
use crate::codecs::CodecError;
use crate::compose::ComposeError;
use crate::dtm::DtmError;
use crate::eval::EvalError;
use crate::graph::GraphError;
use crate::oracle::OracleError;
use crate::reductions::ReductionError;
use crate::unary::UnaryError;

/// Umbrella error for callers that mix several subsystems.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Validation(#[from] ValidationError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Compose(#[from] ComposeError),
    #[error(transparent)]
    Dtm(#[from] DtmError),
    #[error(transparent)]
    Unary(#[from] UnaryError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("oracle disagreement: {0}")]
    Disagreement(String),
    #[error("{0}")]
    Invalid(String),
}
