//! Bit-exact string encodings with validating decoders.

mod automaton;
mod binary;
mod graph;
mod prime;
mod quaternary;
mod unary;

use thiserror::Error;

pub use self::automaton::{decode_automaton, encode_automaton, entry_width, Skeleton};
pub use self::binary::{bin_fixed, binary_repr, parse_bin_fixed, parse_binary};
pub use self::graph::{
    decode_graph, encode_graph, graph_preimage, validate_graph_encoding, vertex_count_of_encoding,
    GraphCondition, GraphEncodingReport,
};
pub use self::prime::{
    decode_graph_prime, encode_graph_prime, nth_prime, prime_block_width, prime_index, PrimeTable,
};
pub use self::quaternary::{decode_quaternary, encode_quaternary, QUAD_SYMBOLS};
pub use self::unary::{encode_graph_unary, UnaryWord};

use crate::graph::GraphError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodecError {
    #[error("symbol `{0}` not allowed here")]
    BadSymbol(char),
    #[error("odd-length binary string cannot be paired")]
    OddLength,
    #[error("width {width} too small for {value}: need at least {needed}")]
    WidthTooSmall { width: usize, value: u64, needed: usize },
    #[error("graph encoding violates {condition}: {detail}")]
    Graph { condition: GraphCondition, detail: String },
    #[error("automaton encoding: {0}")]
    Automaton(String),
    #[error("prime encoding: {0}")]
    Prime(String),
    #[error("pair (0,0) has no prime index")]
    ZeroPair,
    #[error("edge (0,0) cannot be represented in unary or prime form")]
    UnrepresentableEdge,
    #[error("vertex pair ({i},{j}) out of range for n = {n}")]
    PairRange { n: usize, i: usize, j: usize },
    #[error("unary length {0} exceeds the materialization cap")]
    Materialization(String),
    #[error("bad unary length `{0}`")]
    UnaryParse(String),
    #[error(transparent)]
    GraphShape(#[from] GraphError),
}
