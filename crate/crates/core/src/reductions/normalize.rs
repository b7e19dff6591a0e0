//! Unique accepting state, entered only at `$`.

use crate::automaton::{AutomatonBuilder, Move, StateKind, Symbol, TwoWayAutomaton};

use super::ReductionError;

/// Adds three states: a sweep-to-`$` helper, a rejecting pad, and the new
/// unique accepting state. Former accepting states become existential and
/// sweep to `$` before accepting. State `|Q| + 2` is the accepting one.
pub fn normalize_unique_accept(m: &TwoWayAutomaton) -> Result<TwoWayAutomaton, ReductionError> {
    if !m.structure().is_simple {
        return Err(ReductionError::NotSimple);
    }
    let n = m.state_count();
    let mut b = AutomatonBuilder::new(m.alphabet().to_vec(), m.geometry());
    for q in 0..n {
        let kind = if m.is_accepting(q) { StateKind::Existential } else { m.kind(q) };
        b.add_state(m.name(q), kind);
    }
    let fresh = |base: &str| {
        let mut s = base.to_string();
        while m.state_id(&s).is_some() {
            s.push('\'');
        }
        s
    };
    let sweep = b.add_state(fresh("to-dollar"), StateKind::Existential);
    b.add_state(fresh("pad"), StateKind::Rejecting);
    let accept = b.add_state(fresh("accept"), StateKind::Accepting);
    b.set_initial(m.initial());
    for q in 0..n {
        for sym in m.symbols() {
            for &(p, mv) in m.transitions(q, sym) {
                b.add_transition(q, sym, p, mv);
            }
        }
    }
    for q in (0..n).filter(|&q| m.is_accepting(q)).chain([sweep]) {
        for sym in m.symbols() {
            let to = if sym == Symbol::Dollar { accept } else { sweep };
            b.add_transition(q, sym, to, Move::Right);
        }
    }
    Ok(b.build().expect("normalization keeps the machine valid"))
}

/// Exactly one accepting state, and every transition into it reads `$`.
pub fn is_unique_accept_normal(m: &TwoWayAutomaton) -> bool {
    let acc: Vec<usize> = (0..m.state_count()).filter(|&q| m.is_accepting(q)).collect();
    if acc.len() != 1 || m.initial() == acc[0] {
        return false;
    }
    (0..m.state_count()).all(|q| {
        m.symbols()
            .into_iter()
            .all(|sym| sym == Symbol::Dollar || m.transitions(q, sym).iter().all(|&(p, _)| p != acc[0]))
    })
}
