//! Space-bounded deterministic Turing machines: a read-only input tape
//! `¢x$` and one rewritable work tape of bounded length.
//!
//! [`SpaceBoundedDtm::run`] is the direct simulator used as the oracle for
//! [`dtm_to_narrow_afa`] and [`dtm_to_sweeping_transducer`].

mod afa;
pub mod bundled;
mod transducer;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::automaton::{Move, Symbol};
use crate::builder::BuildError;

pub use afa::{dtm_to_narrow_afa, NarrowAfa};
pub use transducer::{dtm_to_sweeping_transducer, SweepTransducer, TransducerRun};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DtmError {
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("symbol {0:?} is not in the alphabet")]
    UnknownSymbol(char),
    #[error("state `{state}` on ({input}, {work:?}): heads must move by ±1")]
    Stationary { state: String, input: Symbol, work: char },
    #[error("state `{state}` moves the input head off the tape at {input}")]
    OffTape { state: String, input: Symbol },
    #[error("state `{state}` has no transition on ({input}, {work:?})")]
    Missing { state: String, input: Symbol, work: char },
    #[error("halting state `{0}` has outgoing transitions")]
    HaltingTransitions(String),
    #[error("output symbol {0:?} is not in the output alphabet")]
    OutputSymbol(char),
    #[error("machine has no accepting state")]
    NoAccepting,
    #[error("bounds must be positive: {0}")]
    Bounds(String),
    #[error("estimated {estimate} states exceeds the cap {cap}")]
    TooLarge { estimate: u128, cap: usize },
    #[error("transducer run did not halt within {0} steps")]
    NoHalt(usize),
    #[error(transparent)]
    Build(#[from] BuildError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DtmStateKind {
    Working,
    Accepting,
    Rejecting,
}

/// One entry of the transition map. Directions are `Left` or `Right`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DtmStep {
    pub to: usize,
    /// Index into the work alphabet.
    pub write: usize,
    pub input: Move,
    pub work: Move,
    pub output: Option<char>,
}

/// Time, space and narrowness bounds for one parameter class, as numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResourceBounds {
    pub time_bound: usize,
    pub space_bound: usize,
    #[serde(default)]
    pub narrowness_bound: Option<usize>,
}

impl ResourceBounds {
    pub fn new(time_bound: usize, space_bound: usize) -> Result<Self, DtmError> {
        let b = ResourceBounds { time_bound, space_bound, narrowness_bound: None };
        b.check()?;
        Ok(b)
    }

    pub fn check(&self) -> Result<(), DtmError> {
        if self.time_bound == 0 || self.space_bound == 0 || self.narrowness_bound == Some(0) {
            return Err(DtmError::Bounds(format!("{self:?}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpaceBoundedDtm {
    names: Vec<String>,
    kinds: Vec<DtmStateKind>,
    initial: usize,
    input_alphabet: Vec<char>,
    /// Index 0 is the blank.
    work_alphabet: Vec<char>,
    output_alphabet: Option<Vec<char>>,
    delta: HashMap<(usize, Symbol, usize), DtmStep>,
}

/// `(state, input head, work head, work tape)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct DtmSurfaceConfig {
    pub state: usize,
    pub input_head: usize,
    pub work_head: usize,
    pub work: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DtmOutcome {
    Accepted,
    Rejected,
    TimeExceeded,
    SpaceExceeded,
    /// The work head tried to move left of cell 0.
    WorkUnderflow,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DtmRun {
    pub outcome: DtmOutcome,
    pub steps: usize,
    pub output: String,
    pub last: DtmSurfaceConfig,
}

impl DtmRun {
    pub fn accepted(&self) -> bool {
        self.outcome == DtmOutcome::Accepted
    }

    /// Halted inside the bounds.
    pub fn within_bounds(&self) -> bool {
        matches!(self.outcome, DtmOutcome::Accepted | DtmOutcome::Rejected)
    }
}

impl SpaceBoundedDtm {
    pub fn state_count(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, q: usize) -> &str {
        &self.names[q]
    }

    pub fn kind(&self, q: usize) -> DtmStateKind {
        self.kinds[q]
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn input_alphabet(&self) -> &[char] {
        &self.input_alphabet
    }

    pub fn work_alphabet(&self) -> &[char] {
        &self.work_alphabet
    }

    pub fn output_alphabet(&self) -> Option<&[char]> {
        self.output_alphabet.as_deref()
    }

    pub fn is_halting(&self, q: usize) -> bool {
        self.kinds[q] != DtmStateKind::Working
    }

    pub fn step(&self, q: usize, input: Symbol, work: usize) -> Option<&DtmStep> {
        self.delta.get(&(q, input, work))
    }

    pub fn input_symbols(&self) -> Vec<Symbol> {
        let mut v: Vec<Symbol> = self.input_alphabet.iter().map(|&c| Symbol::Letter(c)).collect();
        v.extend([Symbol::Cent, Symbol::Dollar]);
        v
    }

    /// The tape `¢x$` as symbols.
    pub fn tape(&self, x: &str) -> Result<Vec<Symbol>, DtmError> {
        let mut t = vec![Symbol::Cent];
        for ch in x.chars() {
            if !self.input_alphabet.contains(&ch) {
                return Err(DtmError::UnknownSymbol(ch));
            }
            t.push(Symbol::Letter(ch));
        }
        t.push(Symbol::Dollar);
        Ok(t)
    }

    /// Runs from `(q0, 0, 0, B^S)` until a halting state or a bound is hit.
    pub fn run(&self, x: &str, bounds: &ResourceBounds) -> Result<DtmRun, DtmError> {
        bounds.check()?;
        let tape = self.tape(x)?;
        let mut q = self.initial;
        let (mut j, mut k) = (0usize, 0usize);
        let mut w = vec![0usize; bounds.space_bound];
        let mut output = String::new();
        let mut steps = 0;
        let outcome = loop {
            match self.kinds[q] {
                DtmStateKind::Accepting => break DtmOutcome::Accepted,
                DtmStateKind::Rejecting => break DtmOutcome::Rejected,
                DtmStateKind::Working => {}
            }
            if steps == bounds.time_bound {
                break DtmOutcome::TimeExceeded;
            }
            let st = *self.step(q, tape[j], w[k]).expect("validated machines are total");
            w[k] = st.write;
            output.extend(st.output);
            steps += 1;
            q = st.to;
            j = (j as isize + st.input.offset()) as usize;
            match k as isize + st.work.offset() {
                -1 => break DtmOutcome::WorkUnderflow,
                nk if nk as usize >= bounds.space_bound => break DtmOutcome::SpaceExceeded,
                nk => k = nk as usize,
            }
        };
        let work = w.iter().map(|&g| self.work_alphabet[g]).collect();
        Ok(DtmRun {
            outcome,
            steps,
            output,
            last: DtmSurfaceConfig { state: q, input_head: j, work_head: k, work },
        })
    }

    /// Same machine with all accepting states merged into one.
    pub fn with_unique_accept(&self) -> Result<SpaceBoundedDtm, DtmError> {
        let acc: Vec<usize> =
            (0..self.state_count()).filter(|&q| self.kinds[q] == DtmStateKind::Accepting).collect();
        let Some(&keep) = acc.first() else {
            return Err(DtmError::NoAccepting);
        };
        if acc.len() == 1 {
            return Ok(self.clone());
        }
        let mut map = Vec::new();
        let mut names = Vec::new();
        let mut kinds = Vec::new();
        for q in 0..self.state_count() {
            if acc.contains(&q) && q != keep {
                map.push(usize::MAX);
            } else {
                map.push(names.len());
                names.push(self.names[q].clone());
                kinds.push(self.kinds[q]);
            }
        }
        let target = |q: usize| if acc.contains(&q) { map[keep] } else { map[q] };
        let delta = self
            .delta
            .iter()
            .map(|(&(q, s, g), st)| ((map[q], s, g), DtmStep { to: target(st.to), ..*st }))
            .collect();
        Ok(SpaceBoundedDtm {
            names,
            kinds,
            initial: target(self.initial),
            delta,
            ..self.clone()
        })
    }
}

impl fmt::Display for DtmSurfaceConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(q{}, {}, {}, {})", self.state, self.input_head, self.work_head, self.work)
    }
}

/// Assembles a [`SpaceBoundedDtm`], checking every invariant in `build`.
#[derive(Debug, Clone)]
pub struct DtmBuilder {
    names: Vec<String>,
    kinds: Vec<DtmStateKind>,
    initial: usize,
    input_alphabet: Vec<char>,
    work_alphabet: Vec<char>,
    output_alphabet: Option<Vec<char>>,
    delta: HashMap<(usize, Symbol, usize), DtmStep>,
    bad: Vec<DtmError>,
}

impl DtmBuilder {
    /// `work_alphabet[0]` is the blank.
    pub fn new(input_alphabet: Vec<char>, work_alphabet: Vec<char>) -> Self {
        DtmBuilder {
            names: Vec::new(),
            kinds: Vec::new(),
            initial: 0,
            input_alphabet,
            work_alphabet,
            output_alphabet: None,
            delta: HashMap::new(),
            bad: Vec::new(),
        }
    }

    pub fn with_output(mut self, alphabet: Vec<char>) -> Self {
        self.output_alphabet = Some(alphabet);
        self
    }

    pub fn add_state(&mut self, name: impl Into<String>, kind: DtmStateKind) -> usize {
        self.names.push(name.into());
        self.kinds.push(kind);
        self.names.len() - 1
    }

    pub fn set_initial(&mut self, q: usize) {
        self.initial = q;
    }

    pub fn state_count(&self) -> usize {
        self.names.len()
    }

    fn work_index(&mut self, g: char) -> usize {
        match self.work_alphabet.iter().position(|&c| c == g) {
            Some(i) => i,
            None => {
                self.bad.push(DtmError::UnknownSymbol(g));
                0
            }
        }
    }

    /// `δ(from, input, read) = (to, write, input move, work move)`.
    #[allow(clippy::too_many_arguments)]
    pub fn on(
        &mut self,
        from: usize,
        input: Symbol,
        read: char,
        to: usize,
        write: char,
        input_move: Move,
        work_move: Move,
        output: Option<char>,
    ) {
        let (r, w) = (self.work_index(read), self.work_index(write));
        self.delta.insert((from, input, r), DtmStep { to, write: w, input: input_move, work: work_move, output });
    }

    pub fn build(mut self) -> Result<SpaceBoundedDtm, DtmError> {
        if let Some(e) = self.bad.pop() {
            return Err(e);
        }
        let n = self.names.len();
        if self.initial >= n {
            return Err(DtmError::UnknownState(format!("#{}", self.initial)));
        }
        let mut symbols: Vec<Symbol> = self.input_alphabet.iter().map(|&c| Symbol::Letter(c)).collect();
        symbols.extend([Symbol::Cent, Symbol::Dollar]);
        for (&(q, input, g), st) in &self.delta {
            if q >= n || st.to >= n {
                return Err(DtmError::UnknownState(format!("#{}", q.max(st.to))));
            }
            if !symbols.contains(&input) {
                if let Symbol::Letter(c) = input {
                    return Err(DtmError::UnknownSymbol(c));
                }
            }
            let state = self.names[q].clone();
            if self.kinds[q] != DtmStateKind::Working {
                return Err(DtmError::HaltingTransitions(state));
            }
            if st.input == Move::Stay || st.work == Move::Stay {
                return Err(DtmError::Stationary { state, input, work: self.work_alphabet[g] });
            }
            if (input == Symbol::Cent && st.input == Move::Left)
                || (input == Symbol::Dollar && st.input == Move::Right)
            {
                return Err(DtmError::OffTape { state, input });
            }
            if let Some(o) = st.output {
                if !self.output_alphabet.as_ref().is_some_and(|a| a.contains(&o)) {
                    return Err(DtmError::OutputSymbol(o));
                }
            }
        }
        for q in (0..n).filter(|&q| self.kinds[q] == DtmStateKind::Working) {
            for &input in &symbols {
                for g in 0..self.work_alphabet.len() {
                    if !self.delta.contains_key(&(q, input, g)) {
                        return Err(DtmError::Missing {
                            state: self.names[q].clone(),
                            input,
                            work: self.work_alphabet[g],
                        });
                    }
                }
            }
        }
        Ok(SpaceBoundedDtm {
            names: self.names,
            kinds: self.kinds,
            initial: self.initial,
            input_alphabet: self.input_alphabet,
            work_alphabet: self.work_alphabet,
            output_alphabet: self.output_alphabet,
            delta: self.delta,
        })
    }
}
