//! Brute-force reference implementations for differential testing.
//!
//! Nothing here calls into the evaluators; the step relation is re-derived
//! from the transition table so that a bug in the evaluators cannot hide in
//! both places at once.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::automaton::{
    AutomatonBuilder, Geometry, Move, StateKind, Symbol, TwoWayAutomaton,
};
use crate::graph::Digraph3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("machine has universal states")]
    UniversalStates,
    #[error("input symbol `{0}` outside the alphabet")]
    UnknownSymbol(char),
    #[error("enumeration refused for n = {0} (limit {1})")]
    TooLarge(usize, usize),
    #[error("bad generator parameter: {0}")]
    Parameter(String),
}

pub fn reach(g: &Digraph3, s: usize, t: usize) -> bool {
    let mut seen = vec![false; g.n()];
    let mut queue = VecDeque::from([s]);
    seen[s] = true;
    while let Some(u) = queue.pop_front() {
        if u == t {
            return true;
        }
        for &v in g.out(u) {
            if !seen[v] {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    false
}

/// Tape symbols of `¢ x $` and the machine's table, read independently.
struct World<'a> {
    a: &'a TwoWayAutomaton,
    tape: Vec<Symbol>,
}

impl<'a> World<'a> {
    fn new(a: &'a TwoWayAutomaton, x: &str) -> Result<Self, OracleError> {
        let mut tape = vec![Symbol::Cent];
        for c in x.chars() {
            if !a.alphabet().contains(&c) {
                return Err(OracleError::UnknownSymbol(c));
            }
            tape.push(Symbol::Letter(c));
        }
        tape.push(Symbol::Dollar);
        Ok(World { a, tape })
    }

    fn cells(&self) -> usize {
        self.tape.len()
    }

    /// Each transition's landing config, `None` when it falls off a flat tape.
    fn children(&self, q: usize, h: usize) -> Vec<Option<(usize, usize)>> {
        let len = self.cells() as isize;
        self.a
            .transitions(q, self.tape[h])
            .iter()
            .map(|&(p, mv)| {
                let d = match mv {
                    Move::Left => -1,
                    Move::Stay => 0,
                    Move::Right => 1,
                };
                let t = h as isize + d;
                let t = match self.a.geometry() {
                    Geometry::Circular => t.rem_euclid(len),
                    Geometry::Flat if (0..len).contains(&t) => t,
                    Geometry::Flat => return None,
                };
                Some((p, t as usize))
            })
            .collect()
    }
}

/// Iterative-deepening path search up to depth `|Q|·(|x|+2)`.
pub fn nfa_accept_bruteforce(a: &TwoWayAutomaton, x: &str) -> Result<bool, OracleError> {
    if (0..a.state_count()).any(|q| a.kind(q) == StateKind::Universal) {
        return Err(OracleError::UniversalStates);
    }
    let w = World::new(a, x)?;
    let limit = a.state_count() * w.cells();
    for depth in 0..=limit {
        // Largest remaining budget a config has already been searched with.
        let mut budget_seen = vec![-1i64; a.state_count() * w.cells()];
        if dfs(&w, a.initial(), 0, depth as i64, &mut budget_seen) {
            return Ok(true);
        }
    }
    Ok(false)
}

fn dfs(w: &World, q: usize, h: usize, budget: i64, seen: &mut [i64]) -> bool {
    let idx = q * w.cells() + h;
    if seen[idx] >= budget {
        return false;
    }
    seen[idx] = budget;
    match w.a.kind(q) {
        StateKind::Accepting => return true,
        StateKind::Rejecting => return false,
        _ => {}
    }
    if budget == 0 {
        return false;
    }
    w.children(q, h).into_iter().flatten().any(|(p, t)| dfs(w, p, t, budget - 1, seen))
}

/// Bounded-height backward induction over every surface configuration.
pub fn afa_accept_bruteforce(a: &TwoWayAutomaton, x: &str) -> Result<bool, OracleError> {
    let w = World::new(a, x)?;
    let cells = w.cells();
    let n = a.state_count() * cells;
    let height = n;
    let kids: Vec<Vec<Option<(usize, usize)>>> =
        (0..n).map(|i| (i / cells, i % cells)).map(|(q, h)| w.children(q, h)).collect();
    let mut acc: Vec<bool> = (0..n).map(|i| a.kind(i / cells) == StateKind::Accepting).collect();
    for _ in 0..height {
        let next: Vec<bool> = (0..n)
            .map(|i| {
                let holds = |c: &Option<(usize, usize)>| matches!(c, Some((p, t)) if acc[p * cells + t]);
                match a.kind(i / cells) {
                    StateKind::Accepting => true,
                    StateKind::Rejecting => false,
                    StateKind::Existential => kids[i].iter().any(holds),
                    StateKind::Universal => !kids[i].is_empty() && kids[i].iter().all(holds),
                }
            })
            .collect();
        if next == acc {
            break;
        }
        acc = next;
    }
    Ok(acc[a.initial() * cells])
}

pub const ENUMERATION_LIMIT: usize = 4;

/// All strictly ascending neighbour lists of length at most 3 over `0..n`.
fn neighbour_lists(n: usize) -> Vec<Vec<usize>> {
    let mut lists = vec![Vec::new()];
    for a in 0..n {
        lists.push(vec![a]);
        for b in a + 1..n {
            lists.push(vec![a, b]);
            for c in b + 1..n {
                lists.push(vec![a, b, c]);
            }
        }
    }
    lists
}

/// Restartable enumeration of every graph on `n` vertices.
pub struct GraphEnumeration {
    n: usize,
    lists: Vec<Vec<usize>>,
    digits: Vec<usize>,
    done: bool,
}

impl GraphEnumeration {
    pub fn total(&self) -> usize {
        self.lists.len().pow(self.n as u32)
    }
}

impl Iterator for GraphEnumeration {
    type Item = Digraph3;

    fn next(&mut self) -> Option<Digraph3> {
        if self.done {
            return None;
        }
        let mut g = Digraph3::new(self.n).expect("n >= 1");
        for (u, &d) in self.digits.iter().enumerate() {
            for &v in &self.lists[d] {
                g.add_edge(u, v).expect("enumerated lists are valid");
            }
        }
        let mut i = 0;
        loop {
            if i == self.n {
                self.done = true;
                break;
            }
            self.digits[i] += 1;
            if self.digits[i] < self.lists.len() {
                break;
            }
            self.digits[i] = 0;
            i += 1;
        }
        Some(g)
    }
}

pub fn enumerate_graphs(n: usize) -> Result<GraphEnumeration, OracleError> {
    enumerate_graphs_capped(n, ENUMERATION_LIMIT)
}

pub fn enumerate_graphs_capped(n: usize, limit: usize) -> Result<GraphEnumeration, OracleError> {
    if n == 0 || n > limit {
        return Err(OracleError::TooLarge(n, limit));
    }
    Ok(GraphEnumeration { n, lists: neighbour_lists(n), digits: vec![0; n], done: false })
}

pub fn random_graph(n: usize, seed: u64) -> Digraph3 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_graph_with(n, &mut rng)
}

pub fn random_graph_with<R: Rng>(n: usize, rng: &mut R) -> Digraph3 {
    let mut g = Digraph3::new(n.max(1)).expect("n >= 1");
    let all: Vec<usize> = (0..g.n()).collect();
    for u in 0..g.n() {
        let k = rng.gen_range(0..=3.min(g.n()));
        for &v in all.choose_multiple(rng, k) {
            g.add_edge(u, v).expect("distinct targets");
        }
    }
    g
}

/// A random simple 2NFA: circular, all moves +1, branching only at `$`.
pub fn random_simple_nfa(
    states: usize,
    c: usize,
    alphabet: &[char],
    seed: u64,
) -> Result<TwoWayAutomaton, OracleError> {
    if states == 0 {
        return Err(OracleError::Parameter("need at least one state".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = AutomatonBuilder::new(alphabet.to_vec(), Geometry::Circular);
    let kinds: Vec<StateKind> = (0..states)
        .map(|_| match rng.gen_range(0..10) {
            0 | 1 => StateKind::Accepting,
            2 => StateKind::Rejecting,
            _ => StateKind::Existential,
        })
        .collect();
    for (q, k) in kinds.iter().enumerate() {
        b.add_state(format!("q{q}"), *k);
    }
    for q in 0..states {
        if kinds[q].is_halting() {
            continue;
        }
        for sym in alphabet.iter().map(|&a| Symbol::Letter(a)).chain([Symbol::Cent]) {
            if rng.gen_bool(0.85) {
                b.add_transition(q, sym, rng.gen_range(0..states), Move::Right);
            }
        }
        for _ in 0..rng.gen_range(0..=c) {
            b.add_transition(q, Symbol::Dollar, rng.gen_range(0..states), Move::Right);
        }
    }
    b.build().map_err(|e| OracleError::Parameter(e.to_string()))
}

/// Shape knobs for [`random_automaton`].
#[derive(Debug, Clone)]
pub struct RandomShape {
    pub states: usize,
    pub alphabet: Vec<char>,
    pub geometry: Geometry,
    pub universal: bool,
    pub stationary: bool,
    pub max_branch: usize,
}

/// An unrestricted random machine (any directions, optional ∀ states).
pub fn random_automaton(shape: &RandomShape, seed: u64) -> TwoWayAutomaton {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = AutomatonBuilder::new(shape.alphabet.clone(), shape.geometry);
    if shape.stationary {
        b = b.allow_stationary();
    }
    let n = shape.states.max(1);
    let kinds: Vec<StateKind> = (0..n)
        .map(|_| match rng.gen_range(0..10) {
            0 | 1 => StateKind::Accepting,
            2 => StateKind::Rejecting,
            3..=5 if shape.universal => StateKind::Universal,
            _ => StateKind::Existential,
        })
        .collect();
    for (q, k) in kinds.iter().enumerate() {
        b.add_state(format!("q{q}"), *k);
    }
    let symbols: Vec<Symbol> = shape
        .alphabet
        .iter()
        .map(|&a| Symbol::Letter(a))
        .chain([Symbol::Cent, Symbol::Dollar])
        .collect();
    for q in 0..n {
        if kinds[q].is_halting() {
            continue;
        }
        for &sym in &symbols {
            for _ in 0..rng.gen_range(0..=shape.max_branch) {
                let mv = match rng.gen_range(0..if shape.stationary { 3 } else { 2 }) {
                    0 => Move::Right,
                    1 => Move::Left,
                    _ => Move::Stay,
                };
                b.add_transition(q, sym, rng.gen_range(0..n), mv);
            }
        }
    }
    b.build().expect("random machine respects every invariant")
}

/// Every simple 2NFA over `alphabet` with exactly `states` states and at
/// most `c` distinct choices at `$`, state 0 initial.
pub fn enumerate_simple_nfas(states: usize, c: usize, alphabet: &[char]) -> Vec<TwoWayAutomaton> {
    // Per-state options: halting kinds, or an existential row.
    let single: Vec<Option<usize>> = std::iter::once(None).chain((0..states).map(Some)).collect();
    let mut dollar_lists: Vec<Vec<usize>> = vec![Vec::new()];
    let mut frontier: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..c {
        let mut grown = Vec::new();
        for l in &frontier {
            for p in 0..states {
                if !l.contains(&p) {
                    let mut m = l.clone();
                    m.push(p);
                    grown.push(m);
                }
            }
        }
        dollar_lists.extend(grown.iter().cloned());
        frontier = grown;
    }
    let cells = alphabet.len() + 1;
    let mut rows: Vec<Option<(Vec<Option<usize>>, Vec<usize>)>> = vec![None, None];
    let mut counter = vec![0usize; cells];
    loop {
        let firsts: Vec<Option<usize>> = counter.iter().map(|&i| single[i]).collect();
        for d in &dollar_lists {
            rows.push(Some((firsts.clone(), d.clone())));
        }
        let mut i = 0;
        while i < cells {
            counter[i] += 1;
            if counter[i] < single.len() {
                break;
            }
            counter[i] = 0;
            i += 1;
        }
        if i == cells {
            break;
        }
    }
    let mut out = Vec::new();
    let mut pick = vec![0usize; states];
    loop {
        let mut b = AutomatonBuilder::new(alphabet.to_vec(), Geometry::Circular);
        for (q, &r) in pick.iter().enumerate() {
            let kind = match r {
                0 => StateKind::Accepting,
                1 => StateKind::Rejecting,
                _ => StateKind::Existential,
            };
            b.add_state(format!("q{q}"), kind);
        }
        for (q, &r) in pick.iter().enumerate() {
            if let Some((firsts, dollar)) = &rows[r] {
                let syms = alphabet.iter().map(|&a| Symbol::Letter(a)).chain([Symbol::Cent]);
                for (sym, t) in syms.zip(firsts) {
                    if let Some(p) = t {
                        b.add_transition(q, sym, *p, Move::Right);
                    }
                }
                for &p in dollar {
                    b.add_transition(q, Symbol::Dollar, p, Move::Right);
                }
            }
        }
        out.push(b.build().expect("enumerated machine is valid"));
        let mut i = 0;
        while i < states {
            pick[i] += 1;
            if pick[i] < rows.len() {
                break;
            }
            pick[i] = 0;
            i += 1;
        }
        if i == states {
            break;
        }
    }
    out
}

/// All words over `alphabet` of length at most `max_len`, shortest first.
pub fn all_words(alphabet: &[char], max_len: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    let mut layer = vec![String::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for &c in alphabet {
                let mut v = w.clone();
                v.push(c);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn closed_form(n: usize) -> usize {
        let per: usize = (0..=3.min(n)).map(|k| binom(n, k)).sum();
        per.pow(n as u32)
    }

    fn binom(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn enumeration_counts_match_formula() {
        for n in 1..=4 {
            let e = enumerate_graphs(n).unwrap();
            assert_eq!(e.total(), closed_form(n));
            let all: Vec<Digraph3> = e.collect();
            assert_eq!(all.len(), closed_form(n));
            let mut dedup = all.clone();
            dedup.sort_by_key(|g| g.edges());
            dedup.dedup();
            assert_eq!(dedup.len(), all.len());
        }
        assert_eq!(closed_form(1), 2);
        assert_eq!(closed_form(2), 16);
        assert_eq!(closed_form(3), 512);
        assert_eq!(closed_form(4), 50625);
        assert!(enumerate_graphs(5).is_err());
    }

    #[test]
    fn reach_basics() {
        let g = Digraph3::new(1).unwrap();
        assert!(reach(&g, 0, 0));
        let g = Digraph3::from_edges(2, &[(0, 1)]).unwrap();
        assert!(reach(&g, 0, 1));
        assert!(!reach(&Digraph3::new(2).unwrap(), 0, 1));
    }

    #[test]
    fn generators_are_seeded() {
        assert_eq!(random_graph(9, 7), random_graph(9, 7));
        let a = random_simple_nfa(5, 3, &['0', '1'], 11).unwrap();
        assert_eq!(a, random_simple_nfa(5, 3, &['0', '1'], 11).unwrap());
        assert!(a.structure().is_simple || a.structure().branching_bound == 0);
    }

    #[test]
    fn trivial_machines() {
        let mut b = AutomatonBuilder::new(vec!['0'], Geometry::Flat);
        b.add_state("acc", StateKind::Accepting);
        let acc = b.build().unwrap();
        assert!(nfa_accept_bruteforce(&acc, "00").unwrap());
        assert!(afa_accept_bruteforce(&acc, "00").unwrap());
        let mut b = AutomatonBuilder::new(vec!['0'], Geometry::Flat);
        let q = b.add_state("q", StateKind::Existential);
        b.add_transition(q, Symbol::Cent, q, Move::Right);
        b.add_transition(q, Symbol::Letter('0'), q, Move::Left);
        assert!(!nfa_accept_bruteforce(&b.build().unwrap(), "0").unwrap());
    }

    #[test]
    fn simple_nfa_enumeration_size() {
        // One state: accept, reject, or an existential row with
        // 2^2 single-move choices and 2 `$` lists.
        assert_eq!(enumerate_simple_nfas(1, 3, &['0']).len(), 2 + 4 * 2);
    }

    #[test]
    fn independent_of_evaluators() {
        let src = include_str!("oracle.rs");
        let needle = format!("{}::{}", "crate", "eval");
        assert!(!src.contains(&needle));
    }
}
