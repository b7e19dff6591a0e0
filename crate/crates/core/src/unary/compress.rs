//! Evaluating a simple unary 2AFA on `1^e` given only the factors of `e`.
//!
//! Every sweep is replaced by a lookup in the sweep table, so a run becomes
//! a finite game on the states that reach `$`: each such state branches
//! (∀ or ∃, as in the machine) into the sweeps started by its `$`-moves.
//! Infinite plays lose, which is the least fixpoint of that game.
//!
//! The optional flat machine reads `⟨G⟩_prime` directly. Each of its sweeps
//! stands for one sweep of the unary machine: it multiplies the block values
//! into `e mod L` and `min(e, μ)` for the current sweep's cycle length `L`
//! and tail length `μ`, then makes the unary machine's `$`-move.

use std::collections::HashMap;

use serde::Serialize;

use super::rho::{RhoDecomposition, SweepTable};
use super::UnaryError;
use crate::automaton::{Geometry, Move, Quantifier, StateId, StateKind, Symbol, TwoWayAutomaton};
use crate::builder::{explore, BuildError, ExploreOptions, Target};
use crate::codecs::{decode_graph_prime, encode_graph_unary, PrimeTable, UnaryWord};

#[derive(Debug, Clone, Serialize)]
pub struct FlatEmission {
    #[serde(skip)]
    pub machine: TwoWayAutomaton,
    pub states: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct CompressionReport {
    pub n: usize,
    pub source_states: usize,
    /// States that can begin a sweep: the initial state and `$`-targets.
    pub sweep_starts: usize,
    pub max_tail: usize,
    pub max_cycle: usize,
    /// Estimated flat state count: sweep start × residue × block position.
    pub flat_estimate: u128,
    pub flat_cap: usize,
    pub flat_states: Option<usize>,
}

#[derive(Debug)]
pub struct UnaryCompression {
    n: usize,
    table: SweepTable,
    flat: Option<FlatEmission>,
    report: CompressionReport,
}

fn sweep_starts(m: &TwoWayAutomaton) -> Vec<StateId> {
    let mut starts = vec![m.initial()];
    for q in 0..m.state_count() {
        starts.extend(m.transitions(q, Symbol::Dollar).iter().map(|&(p, _)| p));
    }
    starts.sort_unstable();
    starts.dedup();
    starts
}

/// Builds the compressed evaluator for `m` on graphs with `n` vertices and,
/// when the estimate is at most `flat_cap`, the flat machine as well.
pub fn compress_unary_afa(
    m: &TwoWayAutomaton,
    n: usize,
    flat_cap: usize,
) -> Result<UnaryCompression, UnaryError> {
    if n == 0 {
        return Err(UnaryError::Shape("n must be at least 1".into()));
    }
    let table = SweepTable::new(m.clone())?;
    let starts = sweep_starts(m);
    let s = PrimeTable::new(n).block_width().unwrap_or(0);
    let (mut max_tail, mut max_cycle, mut estimate) = (0, 0, 0u128);
    for &c in &starts {
        let r = table.rho(c)?;
        max_tail = max_tail.max(r.tail.len());
        max_cycle = max_cycle.max(r.cycle.len());
        let per = r.cycle.len().max(1) as u128 * (r.tail.len() as u128 + 1);
        estimate += per * (s as u128 + 1) * (1u128 << s) * 2;
    }
    let mut report = CompressionReport {
        n,
        source_states: m.state_count(),
        sweep_starts: starts.len(),
        max_tail,
        max_cycle,
        flat_estimate: estimate,
        flat_cap,
        flat_states: None,
    };
    let flat = if estimate <= flat_cap as u128 {
        match emit_flat(&table, n, flat_cap) {
            Ok(machine) => Some(FlatEmission { states: machine.state_count(), machine }),
            Err(UnaryError::Build(BuildError::StateCap { .. })) => None,
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    report.flat_states = flat.as_ref().map(|f| f.states);
    Ok(UnaryCompression { n, table, flat, report })
}

impl UnaryCompression {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn machine(&self) -> &TwoWayAutomaton {
        self.table.machine()
    }

    pub fn flat(&self) -> Option<&FlatEmission> {
        self.flat.as_ref()
    }

    pub fn report(&self) -> &CompressionReport {
        &self.report
    }

    pub fn rho(&self, q: StateId) -> Result<&RhoDecomposition, UnaryError> {
        self.table.rho(q)
    }

    /// Verdict of the unary machine on `1^e`.
    pub fn evaluate_unary(&self, e: &UnaryWord) -> Result<bool, UnaryError> {
        let m = self.table.machine();
        let mut index: HashMap<StateId, usize> = HashMap::new();
        let mut nodes: Vec<StateId> = Vec::new();
        let mut children: Vec<Vec<Option<StateId>>> = Vec::new();
        let root = self.table.after(m.initial(), e)?;
        let mut stack: Vec<StateId> = root.into_iter().filter(|&p| !m.is_halting(p)).collect();
        while let Some(p) = stack.pop() {
            if index.contains_key(&p) {
                continue;
            }
            index.insert(p, nodes.len());
            nodes.push(p);
            let mut kids = Vec::new();
            for &(c, _) in m.transitions(p, Symbol::Dollar) {
                let after = self.table.after(c, e)?;
                if let Some(q) = after.filter(|&q| !m.is_halting(q)) {
                    stack.push(q);
                }
                kids.push(after);
            }
            children.push(kids);
        }
        let mut value = vec![false; nodes.len()];
        let leaf = |v: &[bool], q: Option<StateId>| match q {
            None => false,
            Some(q) if m.is_halting(q) => m.is_accepting(q),
            Some(q) => v[index[&q]],
        };
        loop {
            let mut changed = false;
            for (i, &p) in nodes.iter().enumerate() {
                if value[i] {
                    continue;
                }
                let kids = &children[i];
                let v = match m.kind(p) {
                    StateKind::Universal => !kids.is_empty() && kids.iter().all(|&q| leaf(&value, q)),
                    _ => kids.iter().any(|&q| leaf(&value, q)),
                };
                if v {
                    value[i] = true;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        Ok(leaf(&value, root))
    }

    /// Verdict on a prime encoding of an `n`-vertex graph.
    pub fn evaluate_prime(&self, x: &str) -> Result<bool, UnaryError> {
        let g = decode_graph_prime(x, self.n)?;
        self.evaluate_unary(&encode_graph_unary(&g)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Read {
    /// Unary-machine state that began this sweep.
    c: StateId,
    /// Product of finished blocks modulo the cycle length.
    res: u64,
    /// Product of finished blocks, capped at the tail length.
    sat: u64,
    started: bool,
    pos: usize,
    block: Block,
}

/// Progress through one `bin_s` block `0^k 1 binary(p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Block {
    Zeros,
    Marked,
    Value(u64),
}

enum Finish {
    Invalid,
    Died,
    At(StateId),
}

struct Flat<'a> {
    table: &'a SweepTable,
    primes: PrimeTable,
    s: usize,
}

impl Flat<'_> {
    fn rho(&self, c: StateId) -> &RhoDecomposition {
        self.table.rho(c).expect("sweep starts decompose")
    }

    fn fresh(&self, c: StateId) -> Read {
        let r = self.rho(c);
        let l = r.cycle.len().max(1) as u64;
        Read { c, res: 1 % l, sat: 1.min(r.tail.len() as u64), started: false, pos: 0, block: Block::Zeros }
    }

    fn is_edge_prime(&self, v: u64) -> bool {
        self.primes.pair_of(v).is_some()
    }

    fn fold(&self, k: &Read) -> Option<(u64, u64)> {
        let v = match k.block {
            Block::Value(v) if k.pos == self.s && self.is_edge_prime(v) => v,
            _ => return None,
        };
        let r = self.rho(k.c);
        let l = r.cycle.len().max(1) as u64;
        let mu = r.tail.len() as u64;
        Some((k.res * (v % l) % l, k.sat.saturating_mul(v).min(mu)))
    }

    fn finish(&self, k: &Read) -> Finish {
        let (res, sat) = if !k.started {
            (k.res, k.sat)
        } else {
            match self.fold(k) {
                Some(p) => p,
                None => return Finish::Invalid,
            }
        };
        let r = self.rho(k.c);
        let mu = r.tail.len() as u64;
        if sat < mu {
            return Finish::At(r.tail[sat as usize]);
        }
        if r.cycle.is_empty() {
            return Finish::Died;
        }
        let l = r.cycle.len() as u64;
        Finish::At(r.cycle[((res + l - mu % l) % l) as usize])
    }

    fn quantifier(&self, k: &Read) -> Quantifier {
        match self.finish(k) {
            Finish::At(p) if self.table.machine().kind(p) == StateKind::Universal => Quantifier::Forall,
            _ => Quantifier::Exists,
        }
    }

    fn delta(&self, k: &Read, sym: Symbol) -> Vec<(Target<Read>, Move)> {
        let m = self.table.machine();
        let t = match sym {
            Symbol::Cent => Target::To(k.clone()),
            Symbol::Letter(b @ ('0' | '1')) => {
                let bit = u64::from(b == '1');
                let block = match k.block {
                    Block::Zeros if bit == 1 => Some(Block::Marked),
                    Block::Zeros => Some(Block::Zeros),
                    Block::Marked => Some(Block::Value(bit)),
                    // No leading zeros in `binary(p)`.
                    Block::Value(0) => None,
                    Block::Value(v) => Some(Block::Value(2 * v + bit)),
                };
                match block {
                    Some(block) if k.pos < self.s => {
                        Target::To(Read { pos: k.pos + 1, block, started: true, ..k.clone() })
                    }
                    _ => Target::Reject,
                }
            }
            Symbol::Letter(_) => match self.fold(k) {
                Some((res, sat)) => Target::To(Read { res, sat, started: true, pos: 0, block: Block::Zeros, ..k.clone() }),
                None => Target::Reject,
            },
            Symbol::Dollar => match self.finish(k) {
                Finish::Invalid | Finish::Died => Target::Reject,
                Finish::At(p) if m.is_halting(p) => {
                    if m.is_accepting(p) {
                        Target::Accept
                    } else {
                        Target::Reject
                    }
                }
                Finish::At(p) => {
                    return m
                        .transitions(p, Symbol::Dollar)
                        .iter()
                        .map(|&(c, _)| (self.start(c), Move::Right))
                        .collect();
                }
            },
        };
        vec![(t, Move::Right)]
    }

    fn start(&self, c: StateId) -> Target<Read> {
        let m = self.table.machine();
        if m.is_halting(c) {
            if m.is_accepting(c) {
                Target::Accept
            } else {
                Target::Reject
            }
        } else {
            Target::To(self.fresh(c))
        }
    }
}

fn emit_flat(table: &SweepTable, n: usize, cap: usize) -> Result<TwoWayAutomaton, UnaryError> {
    let primes = PrimeTable::new(n);
    let s = primes.block_width().unwrap_or(0);
    let f = Flat { table, primes, s };
    let opts = ExploreOptions { stationary: false, cap, what: "flat prime-input machine" };
    let e = explore(
        vec!['0', '1', '#'],
        Geometry::Circular,
        f.start(table.machine().initial()),
        opts,
        |k| f.quantifier(k),
        |k, sym| f.delta(k, sym),
    )?;
    Ok(e.machine)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codecs::encode_graph_prime;
    use crate::eval::{accepts_afa_fixpoint, accepts_nfa};
    use crate::graph::Digraph3;
    use crate::oracle::{enumerate_graphs, reach};
    use crate::unary::build_unary_3dstcon_solver;

    fn without_zero_loop(g: &Digraph3) -> Digraph3 {
        let mut h = Digraph3::new(g.n()).unwrap();
        for (u, v) in g.edges().into_iter().filter(|&e| e != (0, 0)) {
            h.add_edge(u, v).unwrap();
        }
        h
    }

    #[test]
    fn two_vertices_all_graphs() {
        let m = build_unary_3dstcon_solver(2).unwrap();
        let z = compress_unary_afa(&m, 2, 1_000_000).unwrap();
        let flat = &z.flat().expect("small enough to emit").machine;
        assert!(flat.structure().is_simple);
        for g in enumerate_graphs(2).unwrap() {
            let h = without_zero_loop(&g);
            let x = encode_graph_prime(&h).unwrap();
            let e = encode_graph_unary(&h).unwrap();
            let direct = accepts_nfa(&m, &e.materialize(100).unwrap()).unwrap().accepted;
            assert_eq!(z.evaluate_prime(&x).unwrap(), direct, "{:?}", g.edges());
            assert_eq!(accepts_afa_fixpoint(flat, &x).unwrap(), direct, "{:?}", g.edges());
            assert_eq!(direct, reach(&g, 0, 1));
        }
    }

    #[test]
    fn edgeless_and_single_vertex() {
        let m = build_unary_3dstcon_solver(2).unwrap();
        let z = compress_unary_afa(&m, 2, 0).unwrap();
        assert!(z.flat().is_none());
        assert!(!z.evaluate_prime("").unwrap());
        let m1 = build_unary_3dstcon_solver(1).unwrap();
        let z1 = compress_unary_afa(&m1, 1, 1000).unwrap();
        assert!(z1.evaluate_prime("").unwrap());
        assert!(accepts_afa_fixpoint(&z1.flat().unwrap().machine, "").unwrap());
    }

    #[test]
    fn three_vertices_all_graphs() {
        let m = build_unary_3dstcon_solver(3).unwrap();
        let z = compress_unary_afa(&m, 3, 0).unwrap();
        for g in enumerate_graphs(3).unwrap() {
            let x = encode_graph_prime(&without_zero_loop(&g)).unwrap();
            assert_eq!(z.evaluate_prime(&x).unwrap(), reach(&g, 0, 2), "{:?}", g.edges());
        }
    }

    #[test]
    fn flat_rejects_malformed_blocks() {
        let m = build_unary_3dstcon_solver(2).unwrap();
        let z = compress_unary_afa(&m, 2, 1_000_000).unwrap();
        let flat = &z.flat().unwrap().machine;
        for x in ["0110#", "011", "0100", "01100", "1011", "0010"] {
            assert!(!accepts_afa_fixpoint(flat, x).unwrap(), "{x}");
        }
    }

    #[test]
    fn random_alternating_machines() {
        use crate::oracle::random_simple_nfa;
        use rand::{Rng, SeedableRng};
        for seed in 0..200u64 {
            let m = random_simple_nfa(5, 3, &['1'], seed).unwrap();
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut b = m.to_builder();
            for q in 0..m.state_count() {
                if m.kind(q) == StateKind::Existential && rng.gen_bool(0.5) {
                    b.set_kind(q, StateKind::Universal);
                }
            }
            let m = b.build().unwrap();
            let z = compress_unary_afa(&m, 2, 0).unwrap();
            for e in 0..40u64 {
                let want = accepts_afa_fixpoint(&m, &"1".repeat(e as usize)).unwrap();
                let got = z.evaluate_unary(&UnaryWord::from_length(e.into())).unwrap();
                assert_eq!(got, want, "seed {seed}, e = {e}");
            }
        }
    }
}
