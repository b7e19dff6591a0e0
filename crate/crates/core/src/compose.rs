//! Running a validity checker before a main machine.

use thiserror::Error;

use crate::automaton::{AutomatonBuilder, Geometry, Move, Symbol, TwoWayAutomaton};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComposeError {
    #[error("checker must be a simple deterministic machine")]
    CheckerShape,
    #[error("checker accepts from `{state}` on `{symbol}`; acceptance must happen at $")]
    AcceptAwayFromDollar { state: String, symbol: String },
    #[error("checker and main machine use different alphabets")]
    AlphabetMismatch,
    #[error("main machine must run on a circular tape")]
    MainNotCircular,
}

/// The composed machine accepts `x` iff the checker and `main` both accept.
///
/// Every checker transition into an accepting state is taken at `$` with a
/// right move, so redirecting it to `main`'s initial state starts `main` at
/// `¢` with a fresh run. Checker accepting states are dropped.
pub fn chain_with_checker(
    checker: &TwoWayAutomaton,
    main: &TwoWayAutomaton,
) -> Result<TwoWayAutomaton, ComposeError> {
    let st = checker.structure();
    if !st.is_simple || !st.is_deterministic {
        return Err(ComposeError::CheckerShape);
    }
    if checker.alphabet() != main.alphabet() {
        return Err(ComposeError::AlphabetMismatch);
    }
    if main.geometry() != Geometry::Circular {
        return Err(ComposeError::MainNotCircular);
    }
    for q in 0..checker.state_count() {
        for sym in checker.symbols() {
            for &(p, mv) in checker.transitions(q, sym) {
                if checker.is_accepting(p) && (sym != Symbol::Dollar || mv != Move::Right) {
                    return Err(ComposeError::AcceptAwayFromDollar {
                        state: checker.name(q).to_string(),
                        symbol: sym.to_string(),
                    });
                }
            }
        }
    }
    if checker.is_accepting(checker.initial()) {
        return Ok(main.clone());
    }
    let mut b = AutomatonBuilder::new(main.alphabet().to_vec(), Geometry::Circular);
    for q in 0..main.state_count() {
        b.add_state(format!("main:{}", main.name(q)), main.kind(q));
    }
    let mut map = vec![usize::MAX; checker.state_count()];
    for (q, slot) in map.iter_mut().enumerate() {
        if !checker.is_accepting(q) {
            *slot = b.add_state(format!("chk:{}", checker.name(q)), checker.kind(q));
        }
    }
    b.set_initial(map[checker.initial()]);
    for q in 0..main.state_count() {
        for sym in main.symbols() {
            for &(p, mv) in main.transitions(q, sym) {
                b.add_transition(q, sym, p, mv);
            }
        }
    }
    for q in 0..checker.state_count() {
        if checker.is_accepting(q) {
            continue;
        }
        for sym in checker.symbols() {
            for &(p, mv) in checker.transitions(q, sym) {
                let to = if checker.is_accepting(p) { main.initial() } else { map[p] };
                b.add_transition(map[q], sym, to, mv);
            }
        }
    }
    Ok(b.build().expect("composition of valid machines"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::StateKind;
    use crate::eval::accepts_nfa;

    /// Accepts words of even length; one sweep, deciding at `$`.
    fn even_checker() -> TwoWayAutomaton {
        let mut b = AutomatonBuilder::new(vec!['a'], Geometry::Circular);
        let e = b.add_state("even", StateKind::Existential);
        let o = b.add_state("odd", StateKind::Existential);
        let acc = b.add_state("acc", StateKind::Accepting);
        let rej = b.add_state("rej", StateKind::Rejecting);
        b.add_transition(e, Symbol::Cent, e, Move::Right);
        b.add_transition(e, Symbol::Letter('a'), o, Move::Right);
        b.add_transition(o, Symbol::Letter('a'), e, Move::Right);
        b.add_transition(e, Symbol::Dollar, acc, Move::Right);
        b.add_transition(o, Symbol::Dollar, rej, Move::Right);
        b.build().unwrap()
    }

    /// Accepts words containing at least two letters.
    fn two_letters() -> TwoWayAutomaton {
        let mut b = AutomatonBuilder::new(vec!['a'], Geometry::Circular);
        let s0 = b.add_state("s0", StateKind::Existential);
        let s1 = b.add_state("s1", StateKind::Existential);
        let acc = b.add_state("acc", StateKind::Accepting);
        b.add_transition(s0, Symbol::Cent, s0, Move::Right);
        b.add_transition(s0, Symbol::Letter('a'), s1, Move::Right);
        b.add_transition(s1, Symbol::Letter('a'), acc, Move::Right);
        b.build().unwrap()
    }

    #[test]
    fn conjunction() {
        let m = chain_with_checker(&even_checker(), &two_letters()).unwrap();
        assert!(m.structure().is_simple);
        for n in 0..8 {
            let x = "a".repeat(n);
            assert_eq!(accepts_nfa(&m, &x).unwrap().accepted, n % 2 == 0 && n >= 2, "n = {n}");
        }
    }

    #[test]
    fn early_accepting_checker_is_refused() {
        let mut b = even_checker().to_builder();
        b.clear_transitions(1, Symbol::Letter('a'));
        b.add_transition(1, Symbol::Letter('a'), 2, Move::Right);
        let bad = b.build().unwrap();
        assert!(matches!(
            chain_with_checker(&bad, &two_letters()),
            Err(ComposeError::AcceptAwayFromDollar { .. })
        ));
    }
}
