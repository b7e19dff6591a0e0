use std::process::ExitCode;

use thiserror::Error;
use twa_core::automaton::ValidationError;
use twa_core::codecs::CodecError;
use twa_core::graph::GraphError;
use twa_core::{Error as CoreError, UnaryError};

#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed input: bad encodings, machine documents or edge lists.
    #[error("format error: {0}")]
    Format(String),
    #[error("oracle disagreement: {0}")]
    Disagreement(String),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Failed(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Format(_) => ExitCode::from(2),
            CliError::Disagreement(_) => ExitCode::from(3),
            _ => ExitCode::from(1),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Validation(_)
            | CoreError::Codec(_)
            | CoreError::Graph(_)
            | CoreError::Json(_)
            | CoreError::Unary(UnaryError::Codec(_)) => CliError::Format(e.to_string()),
            CoreError::Disagreement(d) => CliError::Disagreement(d),
            other => CliError::Failed(other.to_string()),
        }
    }
}

macro_rules! via_core {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CoreError::from(e).into()
            }
        }
    )*};
}

via_core!(
    ValidationError,
    CodecError,
    GraphError,
    UnaryError,
    serde_json::Error,
    twa_core::eval::EvalError,
    twa_core::builder::BuildError,
    twa_core::dtm::DtmError,
    twa_core::oracle::OracleError,
    twa_core::ReductionError
);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        let code = |e: CliError| format!("{:?}", e.exit_code());
        assert_eq!(code(CodecError::OddLength.into()), format!("{:?}", ExitCode::from(2)));
        assert_eq!(code(CoreError::Disagreement("x".into()).into()), format!("{:?}", ExitCode::from(3)));
        assert_eq!(code(CliError::Usage("x".into())), format!("{:?}", ExitCode::from(1)));
    }
}
