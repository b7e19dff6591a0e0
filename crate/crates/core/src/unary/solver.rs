//! The 3-branching simple unary 2NFA for reachability on `1^e` inputs.
//!
//! At `$` on vertex `i` the machine guesses `k ∈ {1,2,3}`. The following
//! sweeps test `|x| mod p_(i,j)` for `j = 0, 1, ...`, one modulus per sweep,
//! counting down `k` on every hit; the `k`-th hit becomes the next vertex.
//! Running out of candidates kills the branch.

use crate::automaton::{Geometry, Move, Quantifier, Symbol, TwoWayAutomaton};
use crate::builder::{explore, BuildError, ExploreOptions, Target};
use crate::codecs::PrimeTable;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Key {
    Init,
    /// Round `r`, vertex `i`, hits still needed `k`, candidate `j`,
    /// residue `l` of the prefix read so far modulo `p_(i,j)`.
    Test { r: usize, i: usize, k: u8, j: usize, l: u64 },
}

struct Solver {
    n: usize,
    primes: PrimeTable,
}

impl Solver {
    fn first_candidate(&self, i: usize, from: usize) -> Option<usize> {
        (from..self.n).find(|&j| (i, j) != (0, 0))
    }

    fn prime(&self, i: usize, j: usize) -> u64 {
        self.primes.get(i, j).expect("candidate pairs are indexable")
    }

    fn test(&self, r: usize, i: usize, k: u8, from: usize) -> Target<Key> {
        match self.first_candidate(i, from) {
            Some(j) => Target::To(Key::Test { r, i, k, j, l: 0 }),
            None => Target::Reject,
        }
    }

    fn branch(&self, r: usize, i: usize) -> Vec<(Target<Key>, Move)> {
        (1..=3).map(|k| (self.test(r, i, k, 0), Move::Right)).collect()
    }

    fn dollar(&self, key: &Key) -> Vec<(Target<Key>, Move)> {
        match *key {
            Key::Init => self.branch(0, 0),
            Key::Test { r, i, k, j, l } => {
                if l != 0 {
                    return vec![(self.test(r, i, k, j + 1), Move::Right)];
                }
                if k > 1 {
                    return vec![(self.test(r, i, k - 1, j + 1), Move::Right)];
                }
                if j + 1 == self.n {
                    vec![(Target::Accept, Move::Right)]
                } else if r + 2 >= self.n {
                    // Another edge would make the walk longer than n - 1 edges.
                    vec![(Target::Reject, Move::Right)]
                } else {
                    self.branch(r + 1, j)
                }
            }
        }
    }
}

/// Simple circular 2NFA over `{1}` that accepts `1^e` iff the graph whose
/// edge primes divide `e` has a path from 0 to `n - 1`.
pub fn build_unary_3dstcon_solver(n: usize) -> Result<TwoWayAutomaton, BuildError> {
    if n == 0 {
        return Err(BuildError::Parameter("n must be at least 1".into()));
    }
    let s = Solver { n, primes: PrimeTable::new(n) };
    let start = if n == 1 { Target::Accept } else { Target::To(Key::Init) };
    let opts = ExploreOptions { what: "unary 3DSTCON solver", ..ExploreOptions::default() };
    let e = explore(
        vec!['1'],
        Geometry::Circular,
        start,
        opts,
        |_| Quantifier::Exists,
        |key, sym| match sym {
            Symbol::Cent => vec![(Target::To(key.clone()), Move::Right)],
            Symbol::Letter(_) => {
                let next = match *key {
                    Key::Init => Key::Init,
                    Key::Test { r, i, k, j, l } => Key::Test { r, i, k, j, l: (l + 1) % s.prime(i, j) },
                };
                vec![(Target::To(next), Move::Right)]
            }
            Symbol::Dollar => s.dollar(key),
        },
    )?;
    Ok(e.machine)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codecs::encode_graph_unary;
    use crate::eval::accepts_nfa;
    use crate::graph::Digraph3;
    use crate::oracle::{enumerate_graphs, reach};

    #[test]
    fn shape() {
        let s = build_unary_3dstcon_solver(3).unwrap().structure();
        assert!(s.is_simple);
        assert_eq!(s.branching_bound, 3);
    }

    #[test]
    fn one_vertex_accepts_everything() {
        let m = build_unary_3dstcon_solver(1).unwrap();
        for e in 0..5 {
            assert!(accepts_nfa(&m, &"1".repeat(e)).unwrap().accepted);
        }
    }

    #[test]
    fn two_vertices_materialized() {
        let m = build_unary_3dstcon_solver(2).unwrap();
        for g in enumerate_graphs(2).unwrap() {
            let mut h = Digraph3::new(2).unwrap();
            for (u, v) in g.edges().into_iter().filter(|&e| e != (0, 0)) {
                h.add_edge(u, v).unwrap();
            }
            let x = encode_graph_unary(&h).unwrap().materialize(30).unwrap();
            assert_eq!(accepts_nfa(&m, &x).unwrap().accepted, reach(&g, 0, 1), "{:?}", g.edges());
        }
    }

    #[test]
    fn third_hit_is_reachable() {
        // Vertex 0 of a 4-vertex graph with out-neighbours 1, 2, 3.
        let m = build_unary_3dstcon_solver(4).unwrap();
        let g = Digraph3::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let e = encode_graph_unary(&g).unwrap();
        assert_eq!(e.length().to_string(), (2 * 3 * 5).to_string());
        assert!(accepts_nfa(&m, &e.materialize(100).unwrap()).unwrap().accepted);
        let g = Digraph3::from_edges(4, &[(0, 1), (0, 2)]).unwrap();
        let x = encode_graph_unary(&g).unwrap().materialize(100).unwrap();
        assert!(!accepts_nfa(&m, &x).unwrap().accepted);
    }
}
