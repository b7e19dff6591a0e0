use std::collections::HashMap;

use super::{bin_fixed, binary_repr, parse_bin_fixed, CodecError};
use crate::graph::Digraph3;

/// The first `count` primes.
fn first_primes(count: usize) -> Vec<u64> {
    let mut ps: Vec<u64> = Vec::with_capacity(count);
    let mut c = 2u64;
    while ps.len() < count {
        if ps.iter().take_while(|&&p| p * p <= c).all(|&p| c % p != 0) {
            ps.push(c);
        }
        c += 1;
    }
    ps
}

/// The `k`-th prime, 1-indexed (`nth_prime(1) = 2`).
pub fn nth_prime(k: usize) -> u64 {
    assert!(k >= 1, "primes are 1-indexed");
    first_primes(k)[k - 1]
}

/// `p_(i,j)`: the `(i·n + j)`-th prime.
pub fn prime_index(n: usize, i: usize, j: usize) -> Result<u64, CodecError> {
    if i >= n || j >= n {
        return Err(CodecError::PairRange { n, i, j });
    }
    if i == 0 && j == 0 {
        return Err(CodecError::ZeroPair);
    }
    Ok(nth_prime(i * n + j))
}

/// Precomputed `p_(i,j)` for one graph size.
#[derive(Debug, Clone)]
pub struct PrimeTable {
    n: usize,
    primes: Vec<u64>,
    index: HashMap<u64, (usize, usize)>,
}

impl PrimeTable {
    pub fn new(n: usize) -> Self {
        let primes = first_primes(n * n);
        let index = (1..n * n).map(|k| (primes[k - 1], (k / n, k % n))).collect();
        PrimeTable { n, primes, index }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Result<u64, CodecError> {
        if i >= self.n || j >= self.n {
            return Err(CodecError::PairRange { n: self.n, i, j });
        }
        if i == 0 && j == 0 {
            return Err(CodecError::ZeroPair);
        }
        Ok(self.primes[i * self.n + j - 1])
    }

    pub fn pair_of(&self, p: u64) -> Option<(usize, usize)> {
        self.index.get(&p).copied()
    }

    /// Block width `s = |binary(p_(n-1,n-1))| + 1`; `None` when `n = 1`.
    pub fn block_width(&self) -> Option<usize> {
        (self.n >= 2).then(|| binary_repr(self.primes[self.n * self.n - 2]).len() + 1)
    }
}

pub fn prime_block_width(n: usize) -> Option<usize> {
    PrimeTable::new(n).block_width()
}

/// `bin_s` blocks of the edge primes in ascending order, joined by `#`.
pub fn encode_graph_prime(g: &Digraph3) -> Result<String, CodecError> {
    let table = PrimeTable::new(g.n());
    let mut primes = Vec::with_capacity(g.edge_count());
    for (u, v) in g.edges() {
        if (u, v) == (0, 0) {
            return Err(CodecError::UnrepresentableEdge);
        }
        primes.push(table.get(u, v)?);
    }
    primes.sort_unstable();
    let Some(s) = table.block_width() else {
        return Ok(String::new());
    };
    let blocks: Vec<String> =
        primes.iter().map(|&p| bin_fixed(s, p).expect("block width fits every prime")).collect();
    Ok(blocks.join("#"))
}

/// Accepts blocks in any order; each edge may appear once.
pub fn decode_graph_prime(x: &str, n: usize) -> Result<Digraph3, CodecError> {
    let mut g = Digraph3::new(n)?;
    if x.is_empty() {
        return Ok(g);
    }
    let table = PrimeTable::new(n);
    let s = table.block_width().ok_or_else(|| CodecError::Prime("n = 1 admits no blocks".into()))?;
    for block in x.split('#') {
        if block.len() != s || !block.bytes().all(|b| b == b'0' || b == b'1') {
            return Err(CodecError::Prime(format!("block `{block}` is not {s} bits")));
        }
        let p = parse_bin_fixed(block).ok_or_else(|| CodecError::Prime(format!("block `{block}`")))?;
        let (i, j) = table
            .pair_of(p)
            .ok_or_else(|| CodecError::Prime(format!("{p} is not an edge prime for n = {n}")))?;
        g.add_edge(i, j).map_err(|e| CodecError::Prime(e.to_string()))?;
    }
    Ok(g)
}
