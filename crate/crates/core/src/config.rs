//! Size caps shared by the library, the CLI and the test suites.
//!
//! Defaults live in [`DEFAULT_CONFIG`]; a `twa.toml` may override any subset.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::Error;

pub const DEFAULT_CONFIG: &str = include_str!("../../../twa.toml");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Caps {
    pub enumeration_n: usize,
    pub unary_materialization: u64,
    pub flat_emission: usize,
    pub build_states: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            enumeration_n: 4,
            unary_materialization: 10_000_000,
            flat_emission: 1_000_000,
            build_states: 5_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub caps: Caps,
}

impl Config {
    pub fn from_toml_str(text: &str) -> Result<Self, Error> {
        toml::from_str(text).map_err(|e| Error::Invalid(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Invalid(format!("config {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    /// `path` if given, else `./twa.toml` if present, else the defaults.
    pub fn discover(path: Option<&Path>) -> Result<Self, Error> {
        match path {
            Some(p) => Self::load(p),
            None if Path::new("twa.toml").is_file() => Self::load(Path::new("twa.toml")),
            None => Ok(Self::default()),
        }
    }
}
