use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph must have at least one vertex")]
    Empty,
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexRange { vertex: usize, n: usize },
    #[error("vertex {0} would exceed outdegree 3")]
    Outdegree(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("edge list line {line}: {detail}")]
    Parse { line: usize, detail: String },
}

/// Directed graph on `0..n` with at most three out-neighbours per vertex,
/// each list strictly ascending. Source is 0 and target is `n - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Digraph3 {
    n: usize,
    out: Vec<Vec<usize>>,
}

impl Digraph3 {
    pub fn new(n: usize) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        Ok(Digraph3 { n, out: vec![Vec::new(); n] })
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Digraph3::new(n)?;
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn out(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        for w in [u, v] {
            if w >= self.n {
                return Err(GraphError::VertexRange { vertex: w, n: self.n });
            }
        }
        let list = &mut self.out[u];
        match list.binary_search(&v) {
            Ok(_) => Err(GraphError::DuplicateEdge(u, v)),
            Err(_) if list.len() == 3 => Err(GraphError::Outdegree(u)),
            Err(pos) => {
                list.insert(pos, v);
                Ok(())
            }
        }
    }

    /// Edges in row-major order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(u, vs)| vs.iter().map(move |&v| (u, v)))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    /// Vertices whose in-degree plus out-degree exceeds 3.
    pub fn degree_violations(&self) -> Vec<usize> {
        let mut deg: Vec<usize> = self.out.iter().map(Vec::len).collect();
        for vs in &self.out {
            for &v in vs {
                deg[v] += 1;
            }
        }
        (0..self.n).filter(|&v| deg[v] > 3).collect()
    }

    pub fn to_edge_list(&self) -> String {
        let mut s = format!("n={}\n", self.n);
        for (u, v) in self.edges() {
            let _ = writeln!(s, "{u} {v}");
        }
        s
    }

    /// Parses the `n=<count>` header followed by one `u v` pair per line.
    /// Blank lines and lines starting with `#` are skipped.
    pub fn parse_edge_list(text: &str) -> Result<Self, GraphError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let bad = |line, detail: &str| GraphError::Parse { line, detail: detail.to_string() };
        let (line, header) = lines.next().ok_or_else(|| bad(0, "missing n=<count> header"))?;
        let n: usize = header
            .strip_prefix("n=")
            .and_then(|v| v.trim().parse().ok())
            .ok_or_else(|| bad(line, "expected n=<count>"))?;
        let mut g = Digraph3::new(n)?;
        for (line, l) in lines {
            let mut it = l.split_whitespace().map(str::parse::<usize>);
            match (it.next(), it.next(), it.next()) {
                (Some(Ok(u)), Some(Ok(v)), None) => g.add_edge(u, v)?,
                _ => return Err(bad(line, "expected two vertex indices")),
            }
        }
        Ok(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn out_lists_stay_sorted() {
        let g = Digraph3::from_edges(4, &[(0, 3), (0, 1), (0, 2)]).unwrap();
        assert_eq!(g.out(0), &[1, 2, 3]);
        let mut h = g.clone();
        assert_eq!(h.add_edge(0, 0), Err(GraphError::Outdegree(0)));
        assert_eq!(h.add_edge(0, 1), Err(GraphError::DuplicateEdge(0, 1)));
    }

    #[test]
    fn hub_indegree_is_reported() {
        let g = Digraph3::from_edges(5, &[(0, 4), (1, 4), (2, 4), (3, 4)]).unwrap();
        assert_eq!(g.degree_violations(), vec![4]);
    }

    #[test]
    fn edge_list_roundtrip() {
        let g = Digraph3::from_edges(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(Digraph3::parse_edge_list(&g.to_edge_list()).unwrap(), g);
        assert!(Digraph3::parse_edge_list("n=2\n0 5\n").is_err());
        assert!(Digraph3::parse_edge_list("0 1\n").is_err());
    }
}
