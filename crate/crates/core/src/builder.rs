//! Builds machines from a keyed transition function.
//!
//! Most constructions are easiest to state with structured states (tuples of
//! counters, phases, guesses). [`explore`] walks the keys reachable from the
//! start key and numbers them in discovery order, so only reachable states
//! are ever materialized.

use std::collections::{HashMap, VecDeque};
use std::fmt::Debug;
use std::hash::Hash;

use thiserror::Error;

use crate::automaton::{
    AutomatonBuilder, Geometry, Move, Quantifier, StateId, StateKind, Symbol, TwoWayAutomaton,
    ValidationError,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error("state cap {cap} exceeded while building {what}")]
    StateCap { what: String, cap: usize },
    #[error(transparent)]
    Invalid(#[from] ValidationError),
    #[error("bad parameter: {0}")]
    Parameter(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Target<K> {
    To(K),
    Accept,
    Reject,
}

#[derive(Debug, Clone)]
pub struct ExploreOptions {
    pub stationary: bool,
    pub cap: usize,
    pub what: &'static str,
}

impl Default for ExploreOptions {
    fn default() -> Self {
        ExploreOptions { stationary: false, cap: 5_000_000, what: "machine" }
    }
}

pub struct Explored<K> {
    pub machine: TwoWayAutomaton,
    pub ids: HashMap<K, StateId>,
}

pub fn explore<K, Q, D>(
    alphabet: Vec<char>,
    geometry: Geometry,
    start: Target<K>,
    opts: ExploreOptions,
    quantifier: Q,
    mut delta: D,
) -> Result<Explored<K>, BuildError>
where
    K: Clone + Eq + Hash + Debug,
    Q: Fn(&K) -> Quantifier,
    D: FnMut(&K, Symbol) -> Vec<(Target<K>, Move)>,
{
    let mut b = AutomatonBuilder::new(alphabet.clone(), geometry);
    if opts.stationary {
        b = b.allow_stationary();
    }
    let mut ids: HashMap<K, StateId> = HashMap::new();
    let mut accept: Option<StateId> = None;
    let mut reject: Option<StateId> = None;
    let mut queue = VecDeque::new();

    let mut resolve = |t: &Target<K>,
                       b: &mut AutomatonBuilder,
                       ids: &mut HashMap<K, StateId>,
                       queue: &mut VecDeque<StateId>|
     -> Result<StateId, BuildError> {
        match t {
            Target::Accept => Ok(*accept.get_or_insert_with(|| b.add_state("accept", StateKind::Accepting))),
            Target::Reject => Ok(*reject.get_or_insert_with(|| b.add_state("reject", StateKind::Rejecting))),
            Target::To(k) => {
                if let Some(&id) = ids.get(k) {
                    return Ok(id);
                }
                if ids.len() >= opts.cap {
                    return Err(BuildError::StateCap { what: opts.what.to_string(), cap: opts.cap });
                }
                let id = b.add_state(format!("{k:?}"), quantifier(k).into());
                ids.insert(k.clone(), id);
                queue.push_back(id);
                Ok(id)
            }
        }
    };

    let first = resolve(&start, &mut b, &mut ids, &mut queue)?;
    b.set_initial(first);
    let mut by_id: HashMap<StateId, K> = ids.iter().map(|(k, v)| (*v, k.clone())).collect();
    let symbols: Vec<Symbol> = alphabet
        .iter()
        .map(|&c| Symbol::Letter(c))
        .chain([Symbol::Cent, Symbol::Dollar])
        .collect();
    while let Some(id) = queue.pop_front() {
        let key = by_id.remove(&id).expect("queued key is indexed");
        for &sym in &symbols {
            for (t, mv) in delta(&key, sym) {
                let before = b.state_count();
                let to = resolve(&t, &mut b, &mut ids, &mut queue)?;
                if b.state_count() > before {
                    if let Target::To(k) = &t {
                        by_id.insert(to, k.clone());
                    }
                }
                b.add_transition(id, sym, to, mv);
            }
        }
    }
    let machine = b.build()?;
    Ok(Explored { machine, ids })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::accepts_nfa;

    #[test]
    fn counts_letters_mod_three() {
        let e = explore(
            vec!['a'],
            Geometry::Circular,
            Target::To(0u8),
            ExploreOptions::default(),
            |_| Quantifier::Exists,
            |&r, sym| match sym {
                Symbol::Letter(_) => vec![(Target::To((r + 1) % 3), Move::Right)],
                Symbol::Cent => vec![(Target::To(r), Move::Right)],
                Symbol::Dollar if r == 0 => vec![(Target::Accept, Move::Right)],
                Symbol::Dollar => vec![],
            },
        )
        .unwrap();
        assert_eq!(e.machine.state_count(), 4);
        for n in 0..7 {
            let x = "a".repeat(n);
            assert_eq!(accepts_nfa(&e.machine, &x).unwrap().accepted, n % 3 == 0);
        }
    }

    #[test]
    fn cap_is_enforced() {
        let r = explore(
            vec!['a'],
            Geometry::Circular,
            Target::To(0u32),
            ExploreOptions { cap: 10, ..Default::default() },
            |_| Quantifier::Exists,
            |&r, _| vec![(Target::To(r + 1), Move::Right)],
        );
        assert!(matches!(r, Err(BuildError::StateCap { .. })));
    }
}
