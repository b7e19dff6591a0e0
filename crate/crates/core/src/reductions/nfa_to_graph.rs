//! Simple 2NFA plus input word to a reachability instance.
//!
//! Vertex `⟨0,j,0⟩` stands for "state `j` scanning `¢`", `⟨1,k,0⟩` for "state
//! `k` scanning `$`", and `⟨1,k,r⟩` for `r >= 1` are the nodes of a heap
//! gadget that fans out to the nondeterministic choices at `$`.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use super::normalize::normalize_unique_accept;
use crate::automaton::{StateId, Symbol, TwoWayAutomaton};
use crate::graph::{Digraph3, GraphError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("machine is not simple (circular, sweeping, branching only at $)")]
    NotSimple,
    #[error("symbol {0:?} is not in the machine's alphabet")]
    UnknownSymbol(char),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct VertexLabel {
    pub k: u8,
    pub j: usize,
    pub r: usize,
}

impl VertexLabel {
    pub fn new(k: u8, j: usize, r: usize) -> Self {
        VertexLabel { k, j, r }
    }

    /// `2^{e+1} j + 2r + k`.
    pub fn index(self, e: u32) -> usize {
        (j_stride(e)) * self.j + 2 * self.r + self.k as usize
    }

    /// The narrower `2^e j + 2r + k`, which is not injective.
    pub fn narrow_index(self, e: u32) -> usize {
        (1usize << e) * self.j + 2 * self.r + self.k as usize
    }

    pub fn from_index(v: usize, e: u32) -> Self {
        let rest = v % j_stride(e);
        VertexLabel { k: (rest % 2) as u8, j: v / j_stride(e), r: rest / 2 }
    }
}

fn j_stride(e: u32) -> usize {
    1usize << (e + 1)
}

/// `⌈log2(c + 1)⌉`, at least 1.
fn exponent(c: usize) -> u32 {
    (usize::BITS - c.leading_zeros()).max(1)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductionOutput {
    pub graph: Digraph3,
    pub source: usize,
    pub target: usize,
    pub c: usize,
    pub e: u32,
    /// States of the normalized machine.
    pub states: usize,
    /// Labelled vertices; relay vertices added by legalization are absent.
    pub labels: BTreeMap<usize, VertexLabel>,
    /// Vertices with in-degree plus out-degree above 3.
    pub degree_violations: Vec<usize>,
    pub relays: usize,
}

/// State scanning `$` after a sweep over `¢x` started in each state, or
/// `None` if that sweep halts or blocks first.
pub fn sweep_map(m: &TwoWayAutomaton, x: &str) -> Result<Vec<Option<StateId>>, ReductionError> {
    if !m.structure().is_simple {
        return Err(ReductionError::NotSimple);
    }
    let mut word = vec![Symbol::Cent];
    for ch in x.chars() {
        if !m.alphabet().contains(&ch) {
            return Err(ReductionError::UnknownSymbol(ch));
        }
        word.push(Symbol::Letter(ch));
    }
    let run = |mut q: StateId| {
        for &sym in &word {
            if m.is_halting(q) {
                return None;
            }
            q = m.transitions(q, sym).first()?.0;
        }
        (!m.is_halting(q)).then_some(q)
    };
    Ok((0..m.state_count()).map(run).collect())
}

pub fn nfa_to_graph(m: &TwoWayAutomaton, x: &str) -> Result<ReductionOutput, ReductionError> {
    let c = m.structure().branching_bound.max(1);
    let e = exponent(c);
    let m2 = normalize_unique_accept(m)?;
    let states = m2.state_count();
    let accept = states - 1;
    let sweeps = sweep_map(&m2, x)?;

    let mut labels = BTreeMap::new();
    let mut edges = Vec::new();
    let mut edge = |a: VertexLabel, b: VertexLabel| {
        labels.insert(a.index(e), a);
        labels.insert(b.index(e), b);
        edges.push((a.index(e), b.index(e)));
    };
    let half = 1usize << (e - 1);
    for j in 0..states {
        if let Some(k) = sweeps[j] {
            edge(VertexLabel::new(0, j, 0), VertexLabel::new(1, k, 0));
        }
        if m2.is_halting(j) {
            continue;
        }
        edge(VertexLabel::new(1, j, 0), VertexLabel::new(1, j, 1));
        for r in 1..half {
            edge(VertexLabel::new(1, j, r), VertexLabel::new(1, j, 2 * r));
            edge(VertexLabel::new(1, j, r), VertexLabel::new(1, j, 2 * r + 1));
        }
        let mut seen = Vec::new();
        for (t, &(i, _)) in m2.transitions(j, Symbol::Dollar).iter().enumerate() {
            // Two choices per leaf: 2^{e-1} leaves hold up to 2^e >= c + 1.
            let leaf = half + t / 2;
            if !seen.contains(&(leaf, i)) {
                seen.push((leaf, i));
                edge(VertexLabel::new(1, j, leaf), VertexLabel::new(0, i, 0));
            }
        }
    }
    let source = VertexLabel::new(0, m2.initial(), 0).index(e);
    let target = VertexLabel::new(0, accept, 0).index(e);
    labels.insert(source, VertexLabel::from_index(source, e));
    labels.insert(target, VertexLabel::from_index(target, e));
    let graph = Digraph3::from_edges(j_stride(e) * states, &edges)?;
    let degree_violations = graph.degree_violations();
    Ok(ReductionOutput { graph, source, target, c, e, states, labels, degree_violations, relays: 0 })
}

/// Routes the in-edges of every over-degree vertex through a relay chain,
/// leaving it with in-degree 1. Chain nodes have in-degree 2 and
/// out-degree 1. Reachability between original vertices is unchanged.
pub fn legalize_indegree(out: &ReductionOutput) -> Result<ReductionOutput, ReductionError> {
    let g = &out.graph;
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); g.n()];
    for (u, v) in g.edges() {
        preds[v].push(u);
    }
    let mut next = g.n();
    let mut edges = Vec::new();
    for (v, ps) in preds.iter().enumerate() {
        if g.out(v).len() + ps.len() <= 3 || ps.len() < 2 {
            edges.extend(ps.iter().map(|&u| (u, v)));
            continue;
        }
        let mut head = ps[0];
        for &p in &ps[1..] {
            edges.push((head, next));
            edges.push((p, next));
            head = next;
            next += 1;
        }
        edges.push((head, v));
    }
    let graph = Digraph3::from_edges(next, &edges)?;
    let degree_violations = graph.degree_violations();
    Ok(ReductionOutput {
        graph,
        degree_violations,
        relays: out.relays + next - g.n(),
        ..out.clone()
    })
}

/// The reduction graph restricted to vertices that touch an edge (plus
/// source and target), renumbered so the source is 0 and the target `n - 1`.
pub fn solver_instance(out: &ReductionOutput) -> Result<Digraph3, ReductionError> {
    let edges = out.graph.edges();
    let mut keep: Vec<usize> = edges.iter().flat_map(|&(u, v)| [u, v]).collect();
    keep.retain(|&v| v != out.source && v != out.target);
    keep.sort_unstable();
    keep.dedup();
    let mut order = vec![out.source];
    order.extend(keep);
    if out.target != out.source {
        order.push(out.target);
    }
    let index: BTreeMap<usize, usize> = order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut g = Digraph3::new(order.len())?;
    for (u, v) in edges {
        g.add_edge(index[&u], index[&v])?;
    }
    Ok(g)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LabelAudit {
    pub c: usize,
    pub e: u32,
    pub states: usize,
    /// `2^e (n + 2) + 2^{e+1} - 1`, the count under the narrow labeling.
    pub narrow_vertex_count: usize,
    /// `2^{e+1} (n + 3)`, the count under the injective labeling.
    pub vertex_count: usize,
    /// A pair of distinct labels sharing a narrow index, if any.
    pub narrow_collision: Option<(VertexLabel, VertexLabel, usize)>,
    pub injective: bool,
}

/// Label-map arithmetic for a `c`-branching machine with `states` states
/// before normalization.
pub fn label_audit(c: usize, states: usize) -> LabelAudit {
    let e = exponent(c.max(1));
    let total = states + 3;
    let all: Vec<VertexLabel> = (0..total)
        .flat_map(|j| (0..2u8).flat_map(move |k| (0..(1usize << e)).map(move |r| VertexLabel::new(k, j, r))))
        .filter(|l| l.k == 1 || l.r == 0)
        .collect();
    let mut narrow = BTreeMap::new();
    let mut collision = None;
    for &l in &all {
        if let Some(&prev) = narrow.get(&l.narrow_index(e)) {
            collision = collision.or(Some((prev, l, l.narrow_index(e))));
        } else {
            narrow.insert(l.narrow_index(e), l);
        }
    }
    let mut wide: Vec<usize> = all.iter().map(|l| l.index(e)).collect();
    wide.sort_unstable();
    wide.dedup();
    LabelAudit {
        c,
        e,
        states,
        narrow_vertex_count: (1 << e) * (states + 2) + (1 << (e + 1)) - 1,
        vertex_count: j_stride(e) * total,
        narrow_collision: collision,
        injective: wide.len() == all.len() && wide.last().is_some_and(|&v| v < j_stride(e) * total),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{AutomatonBuilder, Geometry, Move, StateKind};
    use crate::eval::accepts_nfa;
    use crate::oracle::{all_words, random_simple_nfa, reach};

    #[test]
    fn exponent_values() {
        assert_eq!(exponent(1), 1);
        assert_eq!(exponent(2), 2);
        assert_eq!(exponent(3), 2);
        assert_eq!(exponent(4), 3);
    }

    #[test]
    fn labels_round_trip() {
        for e in 1..4 {
            for v in 0..200 {
                assert_eq!(VertexLabel::from_index(v, e).index(e), v);
            }
        }
    }

    #[test]
    fn audit_for_three_branching() {
        let a = label_audit(3, 5);
        assert_eq!(a.e, 2);
        assert_eq!(a.narrow_vertex_count, 4 * (5 + 2) + 7);
        assert_eq!(a.vertex_count, 8 * (5 + 3));
        assert!(a.injective);
        let (x, y, v) = a.narrow_collision.unwrap();
        assert_ne!(x, y);
        assert_eq!(x.narrow_index(2), v);
        assert_eq!(y.narrow_index(2), v);
    }

    #[test]
    fn accept_everything() {
        let mut b = AutomatonBuilder::new(vec!['0', '1'], Geometry::Circular);
        let q = b.add_state("q", StateKind::Existential);
        let acc = b.add_state("acc", StateKind::Accepting);
        b.add_transition(q, Symbol::Cent, acc, Move::Right);
        let m = b.build().unwrap();
        for x in ["", "0", "0110"] {
            let out = nfa_to_graph(&m, x).unwrap();
            assert!(reach(&out.graph, out.source, out.target));
        }
    }

    #[test]
    fn random_agreement_and_legalization() {
        for seed in 0..300 {
            let m = random_simple_nfa(1 + (seed % 5) as usize, 3, &['0', '1'], seed).unwrap();
            for x in all_words(&['0', '1'], 3) {
                let want = accepts_nfa(&m, &x).unwrap().accepted;
                let out = nfa_to_graph(&m, &x).unwrap();
                assert!(out.graph.n() == 8 * out.states || out.e != 2);
                assert_eq!(reach(&out.graph, out.source, out.target), want, "seed {seed}, x = {x}");
                let legal = legalize_indegree(&out).unwrap();
                assert!(legal.degree_violations.is_empty());
                assert_eq!(reach(&legal.graph, legal.source, legal.target), want);
                let h = solver_instance(&legal).unwrap();
                assert_eq!(reach(&h, 0, h.n() - 1), want);
            }
        }
    }
}
