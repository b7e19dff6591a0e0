use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use super::{CodecError, PrimeTable};
use crate::graph::Digraph3;

/// A unary word `1^length`, kept symbolic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnaryWord {
    length: BigUint,
    factors: Option<Vec<u64>>,
}

impl UnaryWord {
    pub fn from_length(length: BigUint) -> Self {
        UnaryWord { length, factors: None }
    }

    pub fn from_factors(mut factors: Vec<u64>) -> Self {
        factors.sort_unstable();
        let length = factors.iter().fold(BigUint::one(), |acc, &p| acc * p);
        UnaryWord { length, factors: Some(factors) }
    }

    pub fn length(&self) -> &BigUint {
        &self.length
    }

    pub fn factors(&self) -> Option<&[u64]> {
        self.factors.as_deref()
    }

    /// `length mod m`, from the factors when present.
    pub fn residue(&self, m: u64) -> u64 {
        assert!(m > 0, "modulus must be positive");
        match &self.factors {
            Some(fs) => fs.iter().fold(1 % m, |acc, &p| ((acc as u128 * (p % m) as u128) % m as u128) as u64),
            None => (&self.length % m).to_u64().expect("residue below modulus"),
        }
    }

    /// `min(length, cap)` without forming large products.
    pub fn saturating_len(&self, cap: u64) -> u64 {
        match &self.factors {
            Some(fs) => {
                let mut acc: u64 = 1;
                for &p in fs {
                    if p == 0 {
                        return 0;
                    }
                    acc = acc.saturating_mul(p);
                    if acc >= cap {
                        acc = cap;
                    }
                }
                acc.min(cap)
            }
            None => self.length.to_u64().map_or(cap, |l| l.min(cap)),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.length.is_zero()
    }

    /// The literal word, refused above `cap` symbols.
    pub fn materialize(&self, cap: u64) -> Result<String, CodecError> {
        match self.length.to_u64() {
            Some(l) if l <= cap => Ok("1".repeat(l as usize)),
            _ => Err(CodecError::Materialization(self.length.to_string())),
        }
    }
}

impl fmt::Display for UnaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.factors {
            Some(fs) if !fs.is_empty() => {
                let parts: Vec<String> = fs.iter().map(u64::to_string).collect();
                write!(f, "{}", parts.join("*"))
            }
            _ => write!(f, "{}", self.length),
        }
    }
}

impl Serialize for UnaryWord {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.length.to_string())
    }
}

/// Decimal length (`"30"`) or a factor list (`"2*3*5"`).
impl FromStr for UnaryWord {
    type Err = CodecError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.contains('*') {
            let fs: Result<Vec<u64>, _> = s.split('*').map(|t| t.trim().parse::<u64>()).collect();
            return fs.map(UnaryWord::from_factors).map_err(|_| CodecError::UnaryParse(s.into()));
        }
        BigUint::from_str(s).map(UnaryWord::from_length).map_err(|_| CodecError::UnaryParse(s.into()))
    }
}

/// `1^e` with `e` the product of the edge primes.
pub fn encode_graph_unary(g: &Digraph3) -> Result<UnaryWord, CodecError> {
    let table = PrimeTable::new(g.n());
    let mut fs = Vec::with_capacity(g.edge_count());
    for (u, v) in g.edges() {
        if (u, v) == (0, 0) {
            return Err(CodecError::UnrepresentableEdge);
        }
        fs.push(table.get(u, v)?);
    }
    Ok(UnaryWord::from_factors(fs))
}
