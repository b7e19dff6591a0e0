//! Step semantics and acceptance evaluators.
//!
//! Conventions shared by every evaluator here:
//! * a move off either end of a flat tape is a dead branch;
//! * a universal configuration accepts only if it has at least one
//!   transition and every transition leads to an accepting subtree, so a
//!   dead branch below a universal configuration rejects it;
//! * halting states are judged by membership alone.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::automaton::{Geometry, Move, StateId, StateKind, Symbol, TwoWayAutomaton};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("input symbol `{0}` is not in the machine alphabet")]
    UnknownSymbol(char),
    #[error("machine has universal states; use the alternating evaluator")]
    UniversalStates,
    #[error("configuration ({state}, {head}) is halting")]
    HaltingConfig { state: StateId, head: usize },
    #[error("head {head} outside tape of {cells} cells")]
    HeadOutOfRange { head: usize, cells: usize },
    #[error("state {0} out of range")]
    StateOutOfRange(StateId),
    #[error("depth bound must be at least 1")]
    ZeroDepth,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SurfaceConfig {
    pub state: StateId,
    pub head: usize,
}

impl SurfaceConfig {
    pub fn new(state: StateId, head: usize) -> Self {
        SurfaceConfig { state, head }
    }
}

/// The column sequence of `¢ x $` for one machine.
#[derive(Debug, Clone)]
pub struct Tape {
    cols: Vec<usize>,
}

impl Tape {
    pub fn new(a: &TwoWayAutomaton, x: &str) -> Result<Tape, EvalError> {
        let k = a.alphabet().len();
        let mut cols = Vec::with_capacity(x.len() + 2);
        cols.push(k);
        for c in x.chars() {
            cols.push(a.column(Symbol::Letter(c)).ok_or(EvalError::UnknownSymbol(c))?);
        }
        cols.push(k + 1);
        Ok(Tape { cols })
    }

    pub fn cells(&self) -> usize {
        self.cols.len()
    }

    pub fn column(&self, head: usize) -> usize {
        self.cols[head]
    }
}

/// Where a move from `head` lands; `None` for a dead flat-tape branch.
#[inline]
pub fn moved(geometry: Geometry, cells: usize, head: usize, mv: Move) -> Option<usize> {
    match (geometry, mv) {
        (_, Move::Stay) => Some(head),
        (Geometry::Circular, Move::Right) => Some(if head + 1 == cells { 0 } else { head + 1 }),
        (Geometry::Circular, Move::Left) => Some(if head == 0 { cells - 1 } else { head - 1 }),
        (Geometry::Flat, Move::Right) => (head + 1 < cells).then_some(head + 1),
        (Geometry::Flat, Move::Left) => head.checked_sub(1),
    }
}

/// Successors of `c` in transition-list order, `None` marking dead branches.
fn raw_successors<'a>(
    a: &'a TwoWayAutomaton,
    tape: &Tape,
    c: SurfaceConfig,
) -> impl Iterator<Item = Option<SurfaceConfig>> + 'a {
    let cells = tape.cells();
    let g = a.geometry();
    a.transitions_at(c.state, tape.column(c.head))
        .iter()
        .map(move |&(p, mv)| moved(g, cells, c.head, mv).map(|h| SurfaceConfig::new(p, h)))
}

pub fn step_successors(
    a: &TwoWayAutomaton,
    x: &str,
    c: SurfaceConfig,
) -> Result<Vec<SurfaceConfig>, EvalError> {
    let tape = Tape::new(a, x)?;
    if c.state >= a.state_count() {
        return Err(EvalError::StateOutOfRange(c.state));
    }
    if c.head >= tape.cells() {
        return Err(EvalError::HeadOutOfRange { head: c.head, cells: tape.cells() });
    }
    if a.is_halting(c.state) {
        return Err(EvalError::HaltingConfig { state: c.state, head: c.head });
    }
    Ok(raw_successors(a, &tape, c).flatten().collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct NfaVerdict {
    pub accepted: bool,
    /// Length of a shortest accepting computation path, when accepted.
    pub shortest_path: Option<usize>,
}

/// Reachability of an accepting configuration from `(initial, 0)`.
pub fn accepts_nfa(a: &TwoWayAutomaton, x: &str) -> Result<NfaVerdict, EvalError> {
    if a.has_universal_states() {
        return Err(EvalError::UniversalStates);
    }
    let tape = Tape::new(a, x)?;
    if a.is_simple_cached() {
        Ok(sweep_bfs(a, &tape))
    } else {
        Ok(config_bfs(a, &tape))
    }
}

fn config_bfs(a: &TwoWayAutomaton, tape: &Tape) -> NfaVerdict {
    let cells = tape.cells();
    let mut seen = vec![false; a.state_count() * cells];
    let mut queue = VecDeque::new();
    let start = SurfaceConfig::new(a.initial(), 0);
    seen[start.state * cells] = true;
    queue.push_back((start, 0usize));
    while let Some((c, d)) = queue.pop_front() {
        match a.kind(c.state) {
            StateKind::Accepting => return NfaVerdict { accepted: true, shortest_path: Some(d) },
            StateKind::Rejecting => continue,
            _ => {}
        }
        for n in raw_successors(a, tape, c).flatten() {
            let idx = n.state * cells + n.head;
            if !seen[idx] {
                seen[idx] = true;
                queue.push_back((n, d + 1));
            }
        }
    }
    NfaVerdict { accepted: false, shortest_path: None }
}

/// Simple machines move +1 every step and branch only at `$`, so a run is a
/// sequence of deterministic sweeps. Searching over the states found at `¢`
/// round by round gives the same verdict and shortest length as the
/// configuration search while touching each sweep once.
fn sweep_bfs(a: &TwoWayAutomaton, tape: &Tape) -> NfaVerdict {
    let cells = tape.cells();
    let last = cells - 1;
    let cols = a.columns();
    let next = a.single_table();
    let mut seen = vec![false; a.state_count()];
    let mut frontier = vec![a.initial()];
    seen[a.initial()] = true;
    let mut round = 0usize;
    while !frontier.is_empty() {
        let mut best: Option<usize> = None;
        let mut upcoming = Vec::new();
        for &start in &frontier {
            let mut q = start;
            let mut h = 0;
            loop {
                match a.kind(q) {
                    StateKind::Accepting => {
                        best = Some(best.map_or(h, |b: usize| b.min(h)));
                        break;
                    }
                    StateKind::Rejecting => break,
                    _ => {}
                }
                if h == last {
                    for &(p, _) in a.transitions_at(q, tape.column(h)) {
                        if !seen[p] {
                            seen[p] = true;
                            upcoming.push(p);
                        }
                    }
                    break;
                }
                let t = next[q * cols + tape.column(h)];
                if t == NO_SUCCESSOR {
                    break;
                }
                q = t as usize;
                h += 1;
            }
        }
        if let Some(b) = best {
            return NfaVerdict { accepted: true, shortest_path: Some(round * cells + b) };
        }
        frontier = upcoming;
        round += 1;
    }
    NfaVerdict { accepted: false, shortest_path: None }
}

pub(crate) const NO_SUCCESSOR: u32 = u32::MAX;
pub(crate) const MANY_SUCCESSORS: u32 = u32::MAX - 1;

struct AndOrGraph {
    configs: Vec<SurfaceConfig>,
    /// Successor indices; `None` for a dead branch.
    children: Vec<Vec<Option<usize>>>,
}

fn explore(a: &TwoWayAutomaton, tape: &Tape) -> AndOrGraph {
    let mut index: HashMap<SurfaceConfig, usize> = HashMap::new();
    let start = SurfaceConfig::new(a.initial(), 0);
    let mut configs = vec![start];
    let mut children = Vec::new();
    index.insert(start, 0);
    let mut i = 0;
    while i < configs.len() {
        let c = configs[i];
        let mut kids = Vec::new();
        if !a.is_halting(c.state) {
            for n in raw_successors(a, tape, c) {
                kids.push(n.map(|n| {
                    *index.entry(n).or_insert_with(|| {
                        configs.push(n);
                        configs.len() - 1
                    })
                }));
            }
        }
        children.push(kids);
        i += 1;
    }
    AndOrGraph { configs, children }
}

/// Least-fixpoint acceptance on the reachable AND/OR configuration graph.
pub fn accepts_afa_fixpoint(a: &TwoWayAutomaton, x: &str) -> Result<bool, EvalError> {
    let tape = Tape::new(a, x)?;
    let g = explore(a, &tape);
    let n = g.configs.len();
    let mut parents: Vec<Vec<usize>> = vec![Vec::new(); n];
    // Remaining accepted children needed before a config accepts.
    let mut need = vec![usize::MAX; n];
    let mut accepted = vec![false; n];
    let mut work = Vec::new();
    for (i, kids) in g.children.iter().enumerate() {
        for k in kids.iter().flatten() {
            parents[*k].push(i);
        }
        match a.kind(g.configs[i].state) {
            StateKind::Accepting => {
                accepted[i] = true;
                work.push(i);
            }
            StateKind::Rejecting => {}
            StateKind::Existential => need[i] = 1,
            StateKind::Universal => {
                if !kids.is_empty() && kids.iter().all(Option::is_some) {
                    need[i] = kids.len();
                }
            }
        }
    }
    while let Some(k) = work.pop() {
        for &p in &parents[k] {
            if accepted[p] || need[p] == usize::MAX {
                continue;
            }
            // A universal parent may list the same child twice; each
            // occurrence counts once toward `need`.
            need[p] -= 1;
            if need[p] == 0 {
                accepted[p] = true;
                work.push(p);
            }
        }
    }
    Ok(accepted[0])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LevelLabel {
    AllUniversal,
    AllExistential,
    Mixed,
    Halting,
}

#[derive(Debug, Clone, Serialize)]
pub struct Level {
    pub configs: Vec<SurfaceConfig>,
    pub label: LevelLabel,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComputationGraph {
    pub levels: Vec<Level>,
    /// `edges[i]` links level `i` to level `i + 1` by config indices.
    pub edges: Vec<Vec<(usize, usize)>>,
    pub depth_bound: usize,
    /// ACCEPT labels per level, aligned with `levels[i].configs`.
    pub accept: Vec<Vec<bool>>,
}

impl ComputationGraph {
    pub fn widths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.configs.len()).collect()
    }

    pub fn to_dot(&self, a: &TwoWayAutomaton) -> String {
        let mut out = String::from("digraph computation {\n  rankdir=TB;\n");
        for (i, level) in self.levels.iter().enumerate() {
            let _ = writeln!(out, "  subgraph cluster_level_{i} {{\n    label=\"level {i} ({:?})\";", level.label);
            for (j, c) in level.configs.iter().enumerate() {
                let shape = match a.kind(c.state) {
                    StateKind::Universal => "box",
                    StateKind::Existential => "ellipse",
                    StateKind::Accepting => "doublecircle",
                    StateKind::Rejecting => "octagon",
                };
                let fill = if self.accept[i][j] { ",style=filled,fillcolor=palegreen" } else { "" };
                let _ = writeln!(
                    out,
                    "    n{i}_{j} [label=\"{},{}\",shape={shape}{fill}];",
                    escape(a.name(c.state)),
                    c.head
                );
            }
            out.push_str("  }\n");
        }
        for (i, es) in self.edges.iter().enumerate() {
            for (p, c) in es {
                let _ = writeln!(out, "  n{i}_{p} -> n{}_{c};", i + 1);
            }
        }
        out.push_str("}\n");
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Default depth cap `|Q|·(|x|+2)`.
pub fn default_depth(a: &TwoWayAutomaton, x: &str) -> usize {
    a.state_count() * (x.chars().count() + 2)
}

/// Forward level expansion to `depth_bound`, then backward ACCEPT labeling.
pub fn evaluate_leveled(
    a: &TwoWayAutomaton,
    x: &str,
    depth_bound: usize,
) -> Result<(bool, ComputationGraph), EvalError> {
    if depth_bound == 0 {
        return Err(EvalError::ZeroDepth);
    }
    let tape = Tape::new(a, x)?;
    let mut levels: Vec<Vec<SurfaceConfig>> = vec![vec![SurfaceConfig::new(a.initial(), 0)]];
    // Per config: child indices in the next level, `None` for dead branches.
    let mut kids: Vec<Vec<Vec<Option<usize>>>> = Vec::new();
    for _ in 0..depth_bound {
        let cur = levels.last().unwrap();
        let mut index: HashMap<SurfaceConfig, usize> = HashMap::new();
        let mut next = Vec::new();
        let mut level_kids = Vec::with_capacity(cur.len());
        for &c in cur {
            let mut ks = Vec::new();
            if !a.is_halting(c.state) {
                for n in raw_successors(a, &tape, c) {
                    ks.push(n.map(|n| {
                        *index.entry(n).or_insert_with(|| {
                            next.push(n);
                            next.len() - 1
                        })
                    }));
                }
            }
            level_kids.push(ks);
        }
        kids.push(level_kids);
        if next.is_empty() {
            break;
        }
        levels.push(next);
    }
    let depth = levels.len();
    let mut accept: Vec<Vec<bool>> = vec![Vec::new(); depth];
    accept[depth - 1] = levels[depth - 1].iter().map(|c| a.is_accepting(c.state)).collect();
    for i in (0..depth - 1).rev() {
        let below = &accept[i + 1];
        let labels = levels[i]
            .iter()
            .zip(&kids[i])
            .map(|(c, ks)| match a.kind(c.state) {
                StateKind::Accepting => true,
                StateKind::Rejecting => false,
                StateKind::Existential => ks.iter().any(|k| matches!(k, Some(k) if below[*k])),
                StateKind::Universal => {
                    !ks.is_empty() && ks.iter().all(|k| matches!(k, Some(k) if below[*k]))
                }
            })
            .collect();
        accept[i] = labels;
    }
    let verdict = accept[0][0];
    let edges = kids
        .iter()
        .take(depth - 1)
        .map(|lk| {
            let mut es: Vec<(usize, usize)> = lk
                .iter()
                .enumerate()
                .flat_map(|(p, ks)| ks.iter().flatten().map(move |&c| (p, c)))
                .collect();
            es.dedup();
            es
        })
        .collect();
    let levels = levels
        .into_iter()
        .map(|configs| {
            let label = level_label(a, &configs);
            Level { configs, label }
        })
        .collect();
    Ok((verdict, ComputationGraph { levels, edges, depth_bound, accept }))
}

fn level_label(a: &TwoWayAutomaton, configs: &[SurfaceConfig]) -> LevelLabel {
    let mut uni = false;
    let mut exi = false;
    for c in configs {
        match a.kind(c.state) {
            StateKind::Universal => uni = true,
            StateKind::Existential => exi = true,
            _ => {}
        }
    }
    match (uni, exi) {
        (true, true) => LevelLabel::Mixed,
        (true, false) => LevelLabel::AllUniversal,
        (false, true) => LevelLabel::AllExistential,
        (false, false) => LevelLabel::Halting,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Narrowness {
    /// Largest config count over all-universal levels; 0 if there are none.
    pub max_forall_width: usize,
    pub leveled: bool,
    pub mixed_levels: Vec<usize>,
}

pub fn narrowness_of(g: &ComputationGraph) -> Narrowness {
    let mut width = 0;
    let mut mixed = Vec::new();
    for (i, l) in g.levels.iter().enumerate() {
        match l.label {
            LevelLabel::AllUniversal => width = width.max(l.configs.len()),
            LevelLabel::Mixed => mixed.push(i),
            _ => {}
        }
    }
    Narrowness { max_forall_width: width, leveled: mixed.is_empty(), mixed_levels: mixed }
}

pub fn measure_narrowness(
    a: &TwoWayAutomaton,
    x: &str,
    depth_bound: usize,
) -> Result<Narrowness, EvalError> {
    let (_, g) = evaluate_leveled(a, x, depth_bound)?;
    Ok(narrowness_of(&g))
}
