//! Replacing direction-0 moves by a two-step detour.
//!
//! A stay into `q` while reading `σ` becomes a step into the detour state
//! `q̄_σ`, which steps back into `q` on whatever it reads. The detour goes
//! left and back, except from `¢` where it goes right and back so that flat
//! tapes never lose the branch.

use std::collections::HashMap;

use crate::automaton::{AutomatonBuilder, Move, StateId, StateKind, Symbol, TwoWayAutomaton};

pub fn eliminate_stationary_moves(a: &TwoWayAutomaton) -> TwoWayAutomaton {
    if !a.has_stationary_moves() {
        return strip_flag(a);
    }
    let mut b = AutomatonBuilder::new(a.alphabet().to_vec(), a.geometry());
    for q in 0..a.state_count() {
        b.add_state(a.name(q), a.kind(q));
    }
    b.set_initial(a.initial());
    let mut detours: HashMap<(StateId, Symbol), StateId> = HashMap::new();
    let symbols = a.symbols();
    for q in 0..a.state_count() {
        for &sym in &symbols {
            for &(p, mv) in a.transitions(q, sym) {
                if mv != Move::Stay {
                    b.add_transition(q, sym, p, mv);
                    continue;
                }
                let (out, back) = if sym == Symbol::Cent {
                    (Move::Right, Move::Left)
                } else {
                    (Move::Left, Move::Right)
                };
                let d = *detours.entry((p, sym)).or_insert_with(|| {
                    let kind = match a.kind(p) {
                        StateKind::Universal => StateKind::Universal,
                        _ => StateKind::Existential,
                    };
                    let d = b.add_state(detour_name(a, p, sym), kind);
                    for &s in &symbols {
                        b.add_transition(d, s, p, back);
                    }
                    d
                });
                b.add_transition(q, sym, d, out);
            }
        }
    }
    b.build().expect("detour construction preserves validity")
}

fn detour_name(a: &TwoWayAutomaton, p: StateId, sym: Symbol) -> String {
    let mut name = format!("{}~{}", a.name(p), sym);
    while a.state_id(&name).is_some() {
        name.push('\'');
    }
    name
}

fn strip_flag(a: &TwoWayAutomaton) -> TwoWayAutomaton {
    if !a.admits_stationary() {
        return a.clone();
    }
    let mut b = AutomatonBuilder::new(a.alphabet().to_vec(), a.geometry());
    for q in 0..a.state_count() {
        b.add_state(a.name(q), a.kind(q));
    }
    b.set_initial(a.initial());
    for q in 0..a.state_count() {
        for sym in a.symbols() {
            for &(p, mv) in a.transitions(q, sym) {
                b.add_transition(q, sym, p, mv);
            }
        }
    }
    b.build().expect("copy of a valid machine")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::Geometry;
    use crate::eval::accepts_afa_fixpoint;

    #[test]
    fn single_stay_adds_one_detour() {
        let mut b = AutomatonBuilder::new(vec!['0'], Geometry::Flat).allow_stationary();
        let q = b.add_state("q", StateKind::Existential);
        let acc = b.add_state("acc", StateKind::Accepting);
        b.add_transition(q, Symbol::Cent, acc, Move::Stay);
        let a = b.build().unwrap();
        let e = eliminate_stationary_moves(&a);
        assert_eq!(e.state_count(), 3);
        assert!(!e.has_stationary_moves());
        assert!(!e.admits_stationary());
        for x in ["", "0", "00"] {
            assert_eq!(accepts_afa_fixpoint(&e, x).unwrap(), accepts_afa_fixpoint(&a, x).unwrap());
        }
    }

    #[test]
    fn no_stays_is_identity() {
        let mut b = AutomatonBuilder::new(vec!['0'], Geometry::Circular);
        let q = b.add_state("q", StateKind::Existential);
        b.add_transition(q, Symbol::Cent, q, Move::Right);
        let a = b.build().unwrap();
        assert_eq!(eliminate_stationary_moves(&a), a);
    }
}
