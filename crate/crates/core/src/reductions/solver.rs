//! The 3-branching simple 2NFA for reachability on encoded graphs.
//!
//! One round is one sweep. At `$` the machine guesses a slot `j` of the
//! current vertex's row; the next sweep finds that row by matching its label,
//! reads the `j`-th entry, and carries the new vertex to `$`. A round counter
//! rejects once more than `n - 1` edges have been taken.

use super::stream::{build_quad_machine, numeral, Quad, QuadSweeper};
use super::validator::build_graph_validator;
use crate::automaton::TwoWayAutomaton;
use crate::builder::{BuildError, Target};
use crate::compose::chain_with_checker;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Key {
    /// The opening sweep to the first branch point.
    Init,
    /// Looking for the row of vertex `v` in round `r`, to read slot `j`.
    Seek { r: usize, v: usize, j: u8, field: u8, at: Seek },
    /// Reading the chosen slot; value so far.
    Read { r: usize, value: u64 },
    /// Slot read; carrying the successor to `$`.
    Carry { r: usize, w: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Seek {
    /// Inside a row label; `None` once it disagrees with the target.
    Label(Option<u8>),
    /// In the target row, before slot `j`.
    Found,
    /// In some other row.
    Other,
}

struct Solver {
    n: usize,
    labels: Vec<Vec<u8>>,
}

impl Solver {
    fn branch(&self, r: usize, v: usize) -> Vec<Target<Key>> {
        (1..=3)
            .map(|j| Target::To(Key::Seek { r, v, j, field: 0, at: Seek::Label(Some(0)) }))
            .collect()
    }

    fn seek(&self, r: usize, v: usize, j: u8, field: u8, at: &Seek, q: Quad) -> Target<Key> {
        let to = |field: u8, at: Seek| Target::To(Key::Seek { r, v, j, field, at });
        match (at, q.digit()) {
            (Seek::Label(Some(pos)), Some(d)) => {
                let label = &self.labels[v];
                let ok = (*pos as usize) < label.len() && label[*pos as usize] == d;
                to(field, Seek::Label(ok.then_some(pos + 1)))
            }
            (Seek::Label(_), Some(_)) => to(field, at.clone()),
            (Seek::Label(m), None) => {
                let hit = matches!(m, Some(p) if *p as usize == self.labels[v].len());
                if hit && j == 1 {
                    Target::To(Key::Read { r, value: 0 })
                } else if hit {
                    to(1, Seek::Found)
                } else {
                    to(1, Seek::Other)
                }
            }
            (_, Some(_)) => to(field, at.clone()),
            (Seek::Found, None) if field + 1 == j => Target::To(Key::Read { r, value: 0 }),
            (Seek::Found, None) => to(field + 1, Seek::Found),
            (Seek::Other, None) if field == 4 => to(0, Seek::Label(Some(0))),
            (Seek::Other, None) => to(field + 1, Seek::Other),
        }
    }

    fn finish_read(&self, r: usize, value: u64) -> Target<Key> {
        if value == 0 || value > self.n as u64 {
            // Empty slot: this branch has no edge to follow.
            Target::Reject
        } else {
            Target::To(Key::Carry { r, w: value as usize - 1 })
        }
    }
}

impl QuadSweeper for Solver {
    type K = Key;

    fn start(&self) -> Target<Key> {
        if self.n == 1 {
            Target::Accept
        } else {
            Target::To(Key::Init)
        }
    }

    fn quad(&self, k: &Key, q: Quad) -> Target<Key> {
        match k {
            Key::Init | Key::Carry { .. } => Target::To(k.clone()),
            Key::Seek { r, v, j, field, at } => self.seek(*r, *v, *j, *field, at, q),
            Key::Read { r, value } => match q.digit() {
                Some(d) => {
                    let value = 2 * value + d as u64;
                    if value > self.n as u64 {
                        Target::Reject
                    } else {
                        Target::To(Key::Read { r: *r, value })
                    }
                }
                None => self.finish_read(*r, *value),
            },
        }
    }

    fn dollar(&self, k: &Key) -> Vec<Target<Key>> {
        let (r, w) = match k {
            Key::Init => return self.branch(0, 0),
            Key::Carry { r, w } => (*r, *w),
            // Slot 3 of the last row ends at `$`.
            Key::Read { r, value } => match self.finish_read(*r, *value) {
                Target::To(Key::Carry { r, w }) => (r, w),
                t => return vec![t],
            },
            Key::Seek { .. } => return vec![Target::Reject],
        };
        if w + 1 == self.n {
            vec![Target::Accept]
        } else if r + 2 >= self.n {
            // A further edge would make the walk longer than n - 1 edges.
            vec![Target::Reject]
        } else {
            self.branch(r + 1, w)
        }
    }
}

/// The bare solver, correct on valid encodings of `n`-vertex graphs.
pub fn build_3dstcon_core(n: usize) -> Result<TwoWayAutomaton, BuildError> {
    if n == 0 {
        return Err(BuildError::Parameter("n must be at least 1".into()));
    }
    let s = Solver { n, labels: (1..=n as u64).map(numeral).collect() };
    Ok(build_quad_machine(&s, "3DSTCON solver")?.machine)
}

/// The solver preceded by the encoding validator: rejects every word that
/// is not a valid `n`-vertex encoding.
pub fn build_3dstcon_solver(n: usize) -> Result<TwoWayAutomaton, BuildError> {
    let checker = build_graph_validator(n)?;
    let core = build_3dstcon_core(n)?;
    Ok(chain_with_checker(&checker, &core).expect("validator is a simple deterministic checker"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codecs::encode_graph;
    use crate::eval::accepts_nfa;
    use crate::graph::Digraph3;
    use crate::oracle::{enumerate_graphs, reach};

    #[test]
    fn shape() {
        let s = build_3dstcon_solver(4).unwrap().structure();
        assert!(s.is_simple);
        assert_eq!(s.branching_bound, 3);
    }

    #[test]
    fn two_vertices() {
        let m = build_3dstcon_solver(2).unwrap();
        let edge = Digraph3::from_edges(2, &[(0, 1)]).unwrap();
        assert!(accepts_nfa(&m, &encode_graph(&edge)).unwrap().accepted);
        assert!(!accepts_nfa(&m, &encode_graph(&Digraph3::new(2).unwrap())).unwrap().accepted);
        assert!(!accepts_nfa(&m, "01").unwrap().accepted);
    }

    #[test]
    fn single_vertex_accepts_its_encoding() {
        let m = build_3dstcon_solver(1).unwrap();
        assert!(accepts_nfa(&m, &encode_graph(&Digraph3::new(1).unwrap())).unwrap().accepted);
    }

    #[test]
    fn exhaustive_three_vertices() {
        let m = build_3dstcon_solver(3).unwrap();
        for g in enumerate_graphs(3).unwrap() {
            let got = accepts_nfa(&m, &encode_graph(&g)).unwrap().accepted;
            assert_eq!(got, reach(&g, 0, 2), "{:?}", g.edges());
        }
    }
}
