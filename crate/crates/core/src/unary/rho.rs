//! Tail/cycle structure of one sweep over `¢ 1^e`.
//!
//! On a simple unary machine a sweep is a deterministic walk: one step on
//! `¢`, then one step per `1`. Iterating the `1`-step from `δ(q, ¢)` either
//! halts, dies (no move) or repeats, so the state reaching `$` after `e`
//! letters depends only on `e` below the tail length and on `e` modulo the
//! cycle length above it.

use std::sync::OnceLock;

use serde::Serialize;

use super::UnaryError;
use crate::automaton::{StateId, Symbol, TwoWayAutomaton};
use crate::codecs::UnaryWord;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RhoEnd {
    /// The walk repeats; `cycle` holds at least one state.
    Cycle,
    /// A halting state was reached; it is the whole `cycle`.
    Halted,
    /// The last tail state has no move; `cycle` is empty.
    Died,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RhoDecomposition {
    pub start: StateId,
    /// States after `0, 1, ...` letters, before the cycle is entered.
    pub tail: Vec<StateId>,
    pub cycle: Vec<StateId>,
    pub end: RhoEnd,
}

impl RhoDecomposition {
    pub fn halted(&self) -> bool {
        self.end == RhoEnd::Halted
    }

    /// The state scanning `$` after `e` letters; `None` if the walk died.
    pub fn state_after(&self, e: &UnaryWord) -> Option<StateId> {
        let mu = self.tail.len() as u64;
        let small = e.saturating_len(mu + 1);
        if small < mu {
            return Some(self.tail[small as usize]);
        }
        if self.cycle.is_empty() {
            return None;
        }
        let l = self.cycle.len() as u64;
        let offset = (e.residue(l) + l - mu % l) % l;
        Some(self.cycle[offset as usize])
    }

    /// Same as [`Self::state_after`] for a machine-sized length.
    pub fn state_after_len(&self, e: u64) -> Option<StateId> {
        let mu = self.tail.len() as u64;
        if e < mu {
            return Some(self.tail[e as usize]);
        }
        let l = self.cycle.len() as u64;
        (l > 0).then(|| self.cycle[((e - mu) % l) as usize])
    }
}

pub(crate) fn check_unary_shape(a: &TwoWayAutomaton) -> Result<(), UnaryError> {
    if a.alphabet() != ['1'] {
        return Err(UnaryError::Shape(format!("alphabet {:?} is not {{1}}", a.alphabet())));
    }
    if !a.structure().is_simple {
        return Err(UnaryError::Shape("machine is not simple".into()));
    }
    Ok(())
}

fn single_step(a: &TwoWayAutomaton, q: StateId, sym: Symbol) -> Result<Option<StateId>, UnaryError> {
    match a.transitions(q, sym) {
        [] => Ok(None),
        [(p, _)] => Ok(Some(*p)),
        _ => Err(UnaryError::Nondeterministic { state: q, symbol: sym.to_string() }),
    }
}

fn decompose(a: &TwoWayAutomaton, q_start: StateId) -> Result<RhoDecomposition, UnaryError> {
    let done = |tail: Vec<StateId>, cycle: Vec<StateId>, end| {
        Ok(RhoDecomposition { start: q_start, tail, cycle, end })
    };
    if a.is_halting(q_start) {
        return done(Vec::new(), vec![q_start], RhoEnd::Halted);
    }
    let Some(mut q) = single_step(a, q_start, Symbol::Cent)? else {
        return done(Vec::new(), Vec::new(), RhoEnd::Died);
    };
    let mut seen = vec![usize::MAX; a.state_count()];
    let mut walk = Vec::new();
    loop {
        if a.is_halting(q) {
            return done(walk, vec![q], RhoEnd::Halted);
        }
        if seen[q] != usize::MAX {
            let cycle = walk.split_off(seen[q]);
            return done(walk, cycle, RhoEnd::Cycle);
        }
        seen[q] = walk.len();
        walk.push(q);
        match single_step(a, q, Symbol::Letter('1'))? {
            Some(p) => q = p,
            None => return done(walk, Vec::new(), RhoEnd::Died),
        }
    }
}

/// Decomposes the sweep of `a` that starts in `q_start` on `¢`.
pub fn rho_decompose(a: &TwoWayAutomaton, q_start: StateId) -> Result<RhoDecomposition, UnaryError> {
    check_unary_shape(a)?;
    if q_start >= a.state_count() {
        return Err(UnaryError::State(q_start));
    }
    decompose(a, q_start)
}

/// The state scanning `$` after sweeping `¢ 1^e` from `q_start`, or `None`
/// when the walk dies on the way.
pub fn sweep_state_after_unary(
    a: &TwoWayAutomaton,
    q_start: StateId,
    e: &UnaryWord,
) -> Result<Option<StateId>, UnaryError> {
    Ok(rho_decompose(a, q_start)?.state_after(e))
}

/// Per-state memo of decompositions for one machine. Safe to share between
/// threads; each entry is computed at most once.
#[derive(Debug)]
pub struct SweepTable {
    machine: TwoWayAutomaton,
    memo: Vec<OnceLock<Result<RhoDecomposition, UnaryError>>>,
}

impl SweepTable {
    pub fn new(machine: TwoWayAutomaton) -> Result<Self, UnaryError> {
        check_unary_shape(&machine)?;
        let memo = (0..machine.state_count()).map(|_| OnceLock::new()).collect();
        Ok(SweepTable { machine, memo })
    }

    pub fn machine(&self) -> &TwoWayAutomaton {
        &self.machine
    }

    pub fn rho(&self, q: StateId) -> Result<&RhoDecomposition, UnaryError> {
        let slot = self.memo.get(q).ok_or(UnaryError::State(q))?;
        slot.get_or_init(|| decompose(&self.machine, q)).as_ref().map_err(Clone::clone)
    }

    pub fn after(&self, q: StateId, e: &UnaryWord) -> Result<Option<StateId>, UnaryError> {
        Ok(self.rho(q)?.state_after(e))
    }
}

/// Step-by-step reference: walks `¢ 1^e` one cell at a time.
pub fn explicit_sweep(a: &TwoWayAutomaton, q_start: StateId, e: u64) -> Option<StateId> {
    let step = |q: StateId, sym| a.transitions(q, sym).first().map(|&(p, _)| p);
    if a.is_halting(q_start) {
        return Some(q_start);
    }
    let mut q = step(q_start, Symbol::Cent)?;
    for _ in 0..e {
        if a.is_halting(q) {
            return Some(q);
        }
        q = step(q, Symbol::Letter('1'))?;
    }
    Some(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{AutomatonBuilder, Geometry, Move, StateKind};
    use crate::unary::build_unary_3dstcon_solver;
    use num_bigint::BigUint;

    fn ring(len: usize) -> TwoWayAutomaton {
        let mut b = AutomatonBuilder::new(vec!['1'], Geometry::Circular);
        for i in 0..len {
            b.add_state(format!("r{i}"), StateKind::Existential);
        }
        for i in 0..len {
            b.add_transition(i, Symbol::Cent, 0, Move::Right);
            b.add_transition(i, Symbol::Letter('1'), (i + 1) % len, Move::Right);
        }
        b.build().unwrap()
    }

    #[test]
    fn self_loop() {
        let r = rho_decompose(&ring(1), 0).unwrap();
        assert!(r.tail.is_empty());
        assert_eq!(r.cycle, vec![0]);
        let e = UnaryWord::from_length(BigUint::from(7u8));
        let big = UnaryWord::from_length(BigUint::from(1_000_000_007u64));
        assert_eq!(r.state_after(&e), r.state_after(&big));
    }

    #[test]
    fn swap_tracks_parity() {
        let a = ring(2);
        let r = rho_decompose(&a, 1).unwrap();
        assert_eq!(r.cycle.len(), 2);
        for e in 0..20u64 {
            let want = if e % 2 == 0 { 0 } else { 1 };
            assert_eq!(r.state_after_len(e), Some(want));
        }
        let odd: UnaryWord = "3*5*7".parse().unwrap();
        assert_eq!(r.state_after(&odd), Some(1));
    }

    #[test]
    fn halting_and_dying() {
        let mut b = AutomatonBuilder::new(vec!['1'], Geometry::Circular);
        let q = b.add_state("q", StateKind::Existential);
        let p = b.add_state("p", StateKind::Existential);
        let acc = b.add_state("acc", StateKind::Accepting);
        b.add_transition(q, Symbol::Cent, p, Move::Right);
        b.add_transition(p, Symbol::Letter('1'), acc, Move::Right);
        let a = b.build().unwrap();
        let r = rho_decompose(&a, q).unwrap();
        assert!(r.halted());
        assert_eq!((r.tail.clone(), r.cycle.clone()), (vec![p], vec![acc]));
        assert_eq!(r.state_after_len(0), Some(p));
        assert_eq!(r.state_after_len(9), Some(acc));
        let r = rho_decompose(&a, p).unwrap();
        assert_eq!(r.end, RhoEnd::Died);
        assert_eq!(r.state_after_len(0), None);
    }

    #[test]
    fn rejects_non_unary() {
        let m = crate::reductions::build_graph_validator(2).unwrap();
        assert!(matches!(rho_decompose(&m, 0), Err(UnaryError::Shape(_))));
    }

    #[test]
    fn solver_replay() {
        let a = build_unary_3dstcon_solver(2).unwrap();
        let table = SweepTable::new(a.clone()).unwrap();
        for q in 0..a.state_count() {
            let r = table.rho(q).unwrap();
            let steps = r.tail.len() + 2 * r.cycle.len();
            for e in 0..50.max(steps as u64) {
                assert_eq!(r.state_after_len(e), explicit_sweep(&a, q, e), "q = {q}, e = {e}");
            }
            let e6: UnaryWord = "2*3".parse().unwrap();
            assert_eq!(table.after(q, &e6).unwrap(), explicit_sweep(&a, q, 6));
        }
    }
}
