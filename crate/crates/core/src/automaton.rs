//! Machine representation shared by every builder and evaluator.
//!
//! A [`TwoWayAutomaton`] covers deterministic, nondeterministic and
//! alternating two-way automata over a flat or circular tape. Machines are
//! immutable once built; construction goes through [`AutomatonBuilder`] or
//! [`AutomatonParts`], both of which report every structural violation they
//! find instead of stopping at the first one.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type StateId = usize;

/// A tape cell content: an input letter or one of the two endmarkers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Letter(char),
    Cent,
    Dollar,
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Letter(c) => write!(f, "{c}"),
            Symbol::Cent => f.write_str("¢"),
            Symbol::Dollar => f.write_str("$"),
        }
    }
}

/// Head movement. `Stay` only appears in machines built with
/// [`AutomatonBuilder::allow_stationary`]; see [`crate::stationary`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Move {
    Left,
    Stay,
    Right,
}

impl Move {
    pub fn offset(self) -> isize {
        match self {
            Move::Left => -1,
            Move::Stay => 0,
            Move::Right => 1,
        }
    }

    pub fn from_offset(d: i64) -> Option<Move> {
        match d {
            -1 => Some(Move::Left),
            0 => Some(Move::Stay),
            1 => Some(Move::Right),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Geometry {
    Flat,
    Circular,
}

/// Role of a state. Halting states never carry transitions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StateKind {
    Existential,
    Universal,
    Accepting,
    Rejecting,
}

impl StateKind {
    pub fn is_halting(self) -> bool {
        matches!(self, StateKind::Accepting | StateKind::Rejecting)
    }
}

/// Quantifier for non-halting states, used by builders.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantifier {
    Exists,
    Forall,
}

impl From<Quantifier> for StateKind {
    fn from(q: Quantifier) -> Self {
        match q {
            Quantifier::Exists => StateKind::Existential,
            Quantifier::Forall => StateKind::Universal,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("duplicate state name `{0}`")]
    DuplicateState(String),
    #[error("unknown state `{name}` referenced by {context}")]
    UnknownState { name: String, context: String },
    #[error("state `{0}` is both accepting and rejecting")]
    AcceptRejectOverlap(String),
    #[error("state `{0}` is both universal and existential")]
    QuantifierOverlap(String),
    #[error("non-halting state `{0}` is neither universal nor existential")]
    MissingQuantifier(String),
    #[error("halting state `{state}` has an outgoing transition on `{symbol}`")]
    HaltingWithTransitions { state: String, symbol: String },
    #[error("symbol `{0}` is not in the alphabet")]
    UnknownSymbol(String),
    #[error("alphabet symbol `{0}` is reserved or duplicated")]
    BadAlphabetSymbol(String),
    #[error("direction {0} is not one of +1, -1")]
    BadDirection(i64),
    #[error("stationary move from `{0}` in a machine that does not admit them")]
    StationaryMove(String),
    #[error("unsupported document version {0}")]
    Version(u32),
}

/// Every violation found while assembling a machine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ValidationError {
    pub violations: Vec<Violation>,
}

impl fmt::Display for ValidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "malformed automaton ({} violations)", self.violations.len())?;
        for v in &self.violations {
            write!(f, "; {v}")?;
        }
        Ok(())
    }
}

/// Structural predicates of a machine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructuralReport {
    pub branching_bound: usize,
    pub is_sweeping: bool,
    pub is_end_branching: bool,
    pub is_simple: bool,
    pub is_deterministic: bool,
    pub state_count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoWayAutomaton {
    names: Vec<String>,
    alphabet: Vec<char>,
    initial: StateId,
    kinds: Vec<StateKind>,
    /// Row-major `state * columns + column`; letters first, then ¢, then $.
    delta: Vec<Vec<(StateId, Move)>>,
    geometry: Geometry,
    stationary: bool,
    simple: bool,
    /// Target of the unique +1 move per table cell, or a sentinel.
    single: Vec<u32>,
}

impl TwoWayAutomaton {
    pub(crate) fn is_simple_cached(&self) -> bool {
        self.simple
    }

    pub(crate) fn single_table(&self) -> &[u32] {
        &self.single
    }

    pub fn state_count(&self) -> usize {
        self.names.len()
    }

    pub fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn name(&self, q: StateId) -> &str {
        &self.names[q]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn kind(&self, q: StateId) -> StateKind {
        self.kinds[q]
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.names.iter().position(|n| n == name)
    }

    /// Whether direction-0 moves are admitted.
    pub fn admits_stationary(&self) -> bool {
        self.stationary
    }

    pub fn columns(&self) -> usize {
        self.alphabet.len() + 2
    }

    /// Column index of a symbol: letters in alphabet order, then ¢, then $.
    pub fn column(&self, sym: Symbol) -> Option<usize> {
        match sym {
            Symbol::Letter(c) => self.alphabet.iter().position(|&a| a == c),
            Symbol::Cent => Some(self.alphabet.len()),
            Symbol::Dollar => Some(self.alphabet.len() + 1),
        }
    }

    pub fn symbol_at_column(&self, col: usize) -> Symbol {
        let k = self.alphabet.len();
        if col < k {
            Symbol::Letter(self.alphabet[col])
        } else if col == k {
            Symbol::Cent
        } else {
            Symbol::Dollar
        }
    }

    /// All symbols in column order.
    pub fn symbols(&self) -> Vec<Symbol> {
        (0..self.columns()).map(|c| self.symbol_at_column(c)).collect()
    }

    pub fn transitions(&self, q: StateId, sym: Symbol) -> &[(StateId, Move)] {
        match self.column(sym) {
            Some(col) => &self.delta[q * self.columns() + col],
            None => &[],
        }
    }

    pub(crate) fn transitions_at(&self, q: StateId, col: usize) -> &[(StateId, Move)] {
        &self.delta[q * self.columns() + col]
    }

    pub fn is_accepting(&self, q: StateId) -> bool {
        self.kinds[q] == StateKind::Accepting
    }

    pub fn is_halting(&self, q: StateId) -> bool {
        self.kinds[q].is_halting()
    }

    pub fn has_universal_states(&self) -> bool {
        self.kinds.iter().any(|k| *k == StateKind::Universal)
    }

    pub fn has_stationary_moves(&self) -> bool {
        self.delta.iter().flatten().any(|(_, m)| *m == Move::Stay)
    }

    pub fn structure(&self) -> StructuralReport {
        let cols = self.columns();
        let dollar = cols - 1;
        let mut branching = 0;
        let mut sweeping = self.geometry == Geometry::Circular;
        let mut end_branching = true;
        for (i, row) in self.delta.iter().enumerate() {
            branching = branching.max(row.len());
            if row.iter().any(|(_, m)| *m != Move::Right) {
                sweeping = false;
            }
            if i % cols != dollar && row.len() > 1 {
                end_branching = false;
            }
        }
        StructuralReport {
            branching_bound: branching,
            is_sweeping: sweeping,
            is_end_branching: end_branching,
            is_simple: sweeping && end_branching && self.geometry == Geometry::Circular,
            is_deterministic: branching <= 1,
            state_count: self.names.len(),
        }
    }

    /// Re-opens the machine for modification.
    pub fn to_builder(&self) -> AutomatonBuilder {
        let mut b = AutomatonBuilder::new(self.alphabet.clone(), self.geometry);
        if self.stationary {
            b = b.allow_stationary();
        }
        for (q, name) in self.names.iter().enumerate() {
            b.add_state(name.clone(), self.kinds[q]);
        }
        b.set_initial(self.initial);
        for q in 0..self.names.len() {
            for col in 0..self.columns() {
                for &(p, m) in self.transitions_at(q, col) {
                    b.add_transition(q, self.symbol_at_column(col), p, m);
                }
            }
        }
        b
    }

    pub fn to_parts(&self) -> AutomatonParts {
        let pick = |k: StateKind| {
            self.names
                .iter()
                .enumerate()
                .filter(|(q, _)| self.kinds[*q] == k)
                .map(|(_, n)| n.clone())
                .collect::<Vec<_>>()
        };
        let mut transitions = Vec::new();
        for q in 0..self.names.len() {
            for col in 0..self.columns() {
                for &(p, m) in self.transitions_at(q, col) {
                    transitions.push(TransitionRecord {
                        from: self.names[q].clone(),
                        symbol: symbol_token(self.symbol_at_column(col)),
                        to: self.names[p].clone(),
                        dir: m.offset() as i64,
                    });
                }
            }
        }
        AutomatonParts {
            version: DOCUMENT_VERSION,
            states: self.names.clone(),
            alphabet: self.alphabet.iter().map(|c| c.to_string()).collect(),
            initial: self.names[self.initial].clone(),
            accepting: pick(StateKind::Accepting),
            rejecting: pick(StateKind::Rejecting),
            universal: pick(StateKind::Universal),
            existential: pick(StateKind::Existential),
            geometry: self.geometry,
            stationary: self.stationary,
            transitions,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_parts()).expect("automaton document serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, crate::Error> {
        let parts: AutomatonParts = serde_json::from_str(text)?;
        Ok(parts.build()?)
    }
}

/// Incremental construction by state id.
#[derive(Debug, Clone)]
pub struct AutomatonBuilder {
    alphabet: Vec<char>,
    geometry: Geometry,
    names: Vec<String>,
    kinds: Vec<StateKind>,
    initial: StateId,
    transitions: Vec<(StateId, Symbol, StateId, Move)>,
    stationary: bool,
}

impl AutomatonBuilder {
    pub fn new(alphabet: Vec<char>, geometry: Geometry) -> Self {
        AutomatonBuilder {
            alphabet,
            geometry,
            names: Vec::new(),
            kinds: Vec::new(),
            initial: 0,
            transitions: Vec::new(),
            stationary: false,
        }
    }

    pub fn allow_stationary(mut self) -> Self {
        self.stationary = true;
        self
    }

    pub fn add_state(&mut self, name: impl Into<String>, kind: StateKind) -> StateId {
        self.names.push(name.into());
        self.kinds.push(kind);
        self.names.len() - 1
    }

    pub fn state_count(&self) -> usize {
        self.names.len()
    }

    pub fn set_kind(&mut self, q: StateId, kind: StateKind) {
        self.kinds[q] = kind;
    }

    pub fn set_initial(&mut self, q: StateId) {
        self.initial = q;
    }

    pub fn add_transition(&mut self, from: StateId, sym: Symbol, to: StateId, mv: Move) {
        self.transitions.push((from, sym, to, mv));
    }

    /// Drops every transition leaving `from` on `sym`.
    pub fn clear_transitions(&mut self, from: StateId, sym: Symbol) {
        self.transitions.retain(|t| !(t.0 == from && t.1 == sym));
    }

    pub fn build(self) -> Result<TwoWayAutomaton, ValidationError> {
        let mut violations = Vec::new();
        check_alphabet(&self.alphabet, &mut violations);
        let mut seen = BTreeSet::new();
        for n in &self.names {
            if !seen.insert(n.as_str()) {
                violations.push(Violation::DuplicateState(n.clone()));
            }
        }
        let count = self.names.len();
        if self.initial >= count {
            violations.push(Violation::UnknownState {
                name: format!("#{}", self.initial),
                context: "initial".into(),
            });
        }
        let cols = self.alphabet.len() + 2;
        let mut delta = vec![Vec::new(); count * cols];
        for &(from, sym, to, mv) in &self.transitions {
            if from >= count || to >= count {
                violations.push(Violation::UnknownState {
                    name: format!("#{}", from.max(to)),
                    context: "transition".into(),
                });
                continue;
            }
            let col = match sym {
                Symbol::Letter(c) => match self.alphabet.iter().position(|&a| a == c) {
                    Some(i) => i,
                    None => {
                        violations.push(Violation::UnknownSymbol(c.to_string()));
                        continue;
                    }
                },
                Symbol::Cent => cols - 2,
                Symbol::Dollar => cols - 1,
            };
            if self.kinds[from].is_halting() {
                violations.push(Violation::HaltingWithTransitions {
                    state: self.names[from].clone(),
                    symbol: sym.to_string(),
                });
                continue;
            }
            if mv == Move::Stay && !self.stationary {
                violations.push(Violation::StationaryMove(self.names[from].clone()));
                continue;
            }
            delta[from * cols + col].push((to, mv));
        }
        if !violations.is_empty() {
            return Err(ValidationError { violations });
        }
        let single = delta
            .iter()
            .map(|row| match row.as_slice() {
                [] => crate::eval::NO_SUCCESSOR,
                [(p, Move::Right)] => *p as u32,
                _ => crate::eval::MANY_SUCCESSORS,
            })
            .collect();
        let mut m = TwoWayAutomaton {
            names: self.names,
            alphabet: self.alphabet,
            initial: self.initial,
            kinds: self.kinds,
            delta,
            geometry: self.geometry,
            stationary: self.stationary,
            simple: false,
            single,
        };
        m.simple = m.structure().is_simple;
        Ok(m)
    }
}

fn check_alphabet(alphabet: &[char], violations: &mut Vec<Violation>) {
    let mut seen = BTreeSet::new();
    for &c in alphabet {
        if c == '¢' || c == '$' || !seen.insert(c) {
            violations.push(Violation::BadAlphabetSymbol(c.to_string()));
        }
    }
}

pub const DOCUMENT_VERSION: u32 = 1;

fn default_version() -> u32 {
    DOCUMENT_VERSION
}

/// One transition entry of the JSON machine document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitionRecord {
    pub from: String,
    pub symbol: String,
    pub to: String,
    pub dir: i64,
}

/// The versioned, name-based machine document. Array order of
/// `transitions` fixes the choice order of each transition list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutomatonParts {
    #[serde(default = "default_version")]
    pub version: u32,
    pub states: Vec<String>,
    pub alphabet: Vec<String>,
    pub initial: String,
    #[serde(default)]
    pub accepting: Vec<String>,
    #[serde(default)]
    pub rejecting: Vec<String>,
    #[serde(default)]
    pub universal: Vec<String>,
    #[serde(default)]
    pub existential: Vec<String>,
    pub geometry: Geometry,
    /// Admits direction-0 moves.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub stationary: bool,
    #[serde(default)]
    pub transitions: Vec<TransitionRecord>,
}

pub fn symbol_token(sym: Symbol) -> String {
    match sym {
        Symbol::Letter(c) => c.to_string(),
        Symbol::Cent => "CENT".into(),
        Symbol::Dollar => "DOLLAR".into(),
    }
}

impl AutomatonParts {
    /// Checks every invariant and assembles the machine.
    pub fn build(&self) -> Result<TwoWayAutomaton, ValidationError> {
        let mut v = Vec::new();
        if self.version != DOCUMENT_VERSION {
            v.push(Violation::Version(self.version));
        }
        let mut alphabet = Vec::new();
        for s in &self.alphabet {
            let mut it = s.chars();
            match (it.next(), it.next()) {
                (Some(c), None) if s != "CENT" && s != "DOLLAR" => alphabet.push(c),
                _ => v.push(Violation::BadAlphabetSymbol(s.clone())),
            }
        }
        check_alphabet(&alphabet, &mut v);
        let mut index: HashMap<&str, StateId> = HashMap::new();
        for (i, n) in self.states.iter().enumerate() {
            if index.insert(n.as_str(), i).is_some() {
                v.push(Violation::DuplicateState(n.clone()));
            }
        }
        let lookup = |name: &str, ctx: &str, v: &mut Vec<Violation>| -> Option<StateId> {
            let r = index.get(name).copied();
            if r.is_none() {
                v.push(Violation::UnknownState { name: name.to_string(), context: ctx.to_string() });
            }
            r
        };
        let collect = |names: &[String], ctx: &str, v: &mut Vec<Violation>| -> BTreeSet<StateId> {
            names.iter().filter_map(|n| lookup(n, ctx, v)).collect()
        };
        let initial = lookup(&self.initial, "initial", &mut v);
        let acc = collect(&self.accepting, "accepting", &mut v);
        let rej = collect(&self.rejecting, "rejecting", &mut v);
        let uni = collect(&self.universal, "universal", &mut v);
        let exi = collect(&self.existential, "existential", &mut v);
        let mut kinds = Vec::with_capacity(self.states.len());
        for (q, name) in self.states.iter().enumerate() {
            if acc.contains(&q) && rej.contains(&q) {
                v.push(Violation::AcceptRejectOverlap(name.clone()));
            }
            if uni.contains(&q) && exi.contains(&q) {
                v.push(Violation::QuantifierOverlap(name.clone()));
            }
            let kind = if acc.contains(&q) {
                StateKind::Accepting
            } else if rej.contains(&q) {
                StateKind::Rejecting
            } else if uni.contains(&q) {
                StateKind::Universal
            } else if exi.contains(&q) {
                StateKind::Existential
            } else {
                v.push(Violation::MissingQuantifier(name.clone()));
                StateKind::Existential
            };
            kinds.push(kind);
        }
        let mut b = AutomatonBuilder::new(alphabet.clone(), self.geometry);
        if self.stationary {
            b = b.allow_stationary();
        }
        for (name, kind) in self.states.iter().zip(&kinds) {
            b.add_state(name.clone(), *kind);
        }
        if let Some(q) = initial {
            b.set_initial(q);
        }
        for t in &self.transitions {
            let from = lookup(&t.from, "transition source", &mut v);
            let to = lookup(&t.to, "transition target", &mut v);
            let sym = match t.symbol.as_str() {
                "CENT" => Some(Symbol::Cent),
                "DOLLAR" => Some(Symbol::Dollar),
                s => {
                    let mut it = s.chars();
                    match (it.next(), it.next()) {
                        (Some(c), None) if alphabet.contains(&c) => Some(Symbol::Letter(c)),
                        _ => {
                            v.push(Violation::UnknownSymbol(s.to_string()));
                            None
                        }
                    }
                }
            };
            let mv = match t.dir {
                1 => Some(Move::Right),
                -1 => Some(Move::Left),
                0 if self.stationary => Some(Move::Stay),
                d => {
                    v.push(Violation::BadDirection(d));
                    None
                }
            };
            if let (Some(f), Some(to), Some(sym), Some(mv)) = (from, to, sym, mv) {
                b.add_transition(f, sym, to, mv);
            }
        }
        match b.build() {
            Ok(m) if v.is_empty() => Ok(m),
            Ok(_) => Err(ValidationError { violations: v }),
            Err(e) => {
                v.extend(e.violations);
                Err(ValidationError { violations: v })
            }
        }
    }
}

/// Checks a machine document and reports its structural predicates.
pub fn validate_automaton(parts: &AutomatonParts) -> Result<StructuralReport, ValidationError> {
    parts.build().map(|m| m.structure())
}
