//! Log-space transducer to simple 2DFA with output, for one input length.
//!
//! The 2DFA keeps the whole DTM surface configuration minus the input head
//! in its state and recovers the head position by counting cells during a
//! sweep. Each sweep performs exactly one DTM step, at the counted cell.

use std::collections::HashMap;

use serde::Serialize;

use super::{DtmError, DtmStateKind, SpaceBoundedDtm};
use crate::automaton::{Geometry, Move, Quantifier, StateId, Symbol, TwoWayAutomaton};
use crate::builder::{explore, ExploreOptions, Target};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Key {
    q: usize,
    /// Work head.
    k: usize,
    work: Vec<usize>,
    /// Simulated input head.
    s: usize,
    /// Cell currently under the sweep.
    j: usize,
    stepped: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepTransducer {
    #[serde(skip)]
    pub machine: TwoWayAutomaton,
    /// Output letter per `(state, column)` transition, row-major.
    #[serde(skip)]
    outputs: Vec<Option<char>>,
    pub length: usize,
    pub space: usize,
    pub states: usize,
    pub estimate: u128,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TransducerRun {
    pub accepted: bool,
    pub output: String,
    pub steps: usize,
}

/// Upper bound `|Q| · S · |Γ|^S · (n+2)^2 · 2` on the reachable states.
fn estimate(d: &SpaceBoundedDtm, n: usize, space: usize) -> u128 {
    let gamma = d.work_alphabet().len() as u128;
    let cells = (n + 2) as u128;
    (d.state_count() as u128)
        .saturating_mul(space as u128)
        .saturating_mul(gamma.saturating_pow(space as u32))
        .saturating_mul(cells * cells * 2)
}

pub fn dtm_to_sweeping_transducer(
    d: &SpaceBoundedDtm,
    n: usize,
    space: usize,
    cap: usize,
) -> Result<SweepTransducer, DtmError> {
    if space == 0 {
        return Err(DtmError::Bounds("space must be positive".into()));
    }
    let est = estimate(d, n, space);
    if est > cap as u128 {
        return Err(DtmError::TooLarge { estimate: est, cap });
    }
    let last = n + 1;
    let start = Key { q: d.initial(), k: 0, work: vec![0; space], s: 0, j: 0, stepped: false };
    let start = match d.kind(d.initial()) {
        DtmStateKind::Working => Target::To(start),
        DtmStateKind::Accepting => Target::Accept,
        DtmStateKind::Rejecting => Target::Reject,
    };
    let mut emitted: HashMap<(Key, Symbol), char> = HashMap::new();
    let explored = explore(
        d.input_alphabet().to_vec(),
        Geometry::Circular,
        start,
        ExploreOptions { cap, what: "sweeping transducer", ..Default::default() },
        |_| Quantifier::Exists,
        |key, sym| {
            let in_range = match sym {
                Symbol::Cent => key.j == 0,
                Symbol::Letter(_) => (1..=n).contains(&key.j),
                Symbol::Dollar => key.j == last,
            };
            if !in_range {
                return vec![(Target::Reject, Move::Right)];
            }
            let next_j = if sym == Symbol::Dollar { 0 } else { key.j + 1 };
            if key.stepped || key.s != key.j {
                let stepped = key.stepped && sym != Symbol::Dollar;
                return vec![(Target::To(Key { j: next_j, stepped, ..key.clone() }), Move::Right)];
            }
            let st = *d.step(key.q, sym, key.work[key.k]).expect("validated machines are total");
            if let Some(o) = st.output {
                emitted.insert((key.clone(), sym), o);
            }
            let k = key.k as isize + st.work.offset();
            if k < 0 || k as usize >= space {
                return vec![(Target::Reject, Move::Right)];
            }
            let target = match d.kind(st.to) {
                DtmStateKind::Accepting => Target::Accept,
                DtmStateKind::Rejecting => Target::Reject,
                DtmStateKind::Working => {
                    let mut work = key.work.clone();
                    work[key.k] = st.write;
                    Target::To(Key {
                        q: st.to,
                        k: k as usize,
                        work,
                        s: (key.s as isize + st.input.offset()) as usize,
                        j: next_j,
                        stepped: sym != Symbol::Dollar,
                    })
                }
            };
            vec![(target, Move::Right)]
        },
    )?;
    let machine = explored.machine;
    let cols = machine.columns();
    let mut outputs = vec![None; machine.state_count() * cols];
    for ((key, sym), o) in emitted {
        let id = explored.ids[&key];
        outputs[id * cols + machine.column(sym).expect("symbol of the machine")] = Some(o);
    }
    Ok(SweepTransducer { states: machine.state_count(), machine, outputs, length: n, space, estimate: est })
}

impl SweepTransducer {
    pub fn output_at(&self, q: StateId, sym: Symbol) -> Option<char> {
        self.outputs[q * self.machine.columns() + self.machine.column(sym)?]
    }

    /// Deterministic run on the circular tape `¢x$`, collecting output.
    pub fn run(&self, x: &str) -> Result<TransducerRun, DtmError> {
        let m = &self.machine;
        let mut tape = vec![Symbol::Cent];
        for ch in x.chars() {
            if !m.alphabet().contains(&ch) {
                return Err(DtmError::UnknownSymbol(ch));
            }
            tape.push(Symbol::Letter(ch));
        }
        tape.push(Symbol::Dollar);
        let limit = m.state_count() * tape.len() + 1;
        let (mut q, mut head) = (m.initial(), 0usize);
        let mut output = String::new();
        for steps in 0..=limit {
            if m.is_halting(q) {
                return Ok(TransducerRun { accepted: m.is_accepting(q), output, steps });
            }
            let sym = tape[head];
            let Some(&(p, _)) = m.transitions(q, sym).first() else {
                return Ok(TransducerRun { accepted: false, output, steps });
            };
            output.extend(self.output_at(q, sym));
            q = p;
            head = (head + 1) % tape.len();
        }
        Err(DtmError::NoHalt(limit))
    }
}
