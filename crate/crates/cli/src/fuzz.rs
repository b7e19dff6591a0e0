//! Differential fuzz campaigns with counterexample minimization.

use std::path::{Path, PathBuf};

use clap::ValueEnum;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use twa_core::automaton::{AutomatonParts, Geometry, StateKind, TwoWayAutomaton};
use twa_core::codecs::{encode_graph, UnaryWord};
use twa_core::eval::{accepts_afa_fixpoint, accepts_nfa};
use twa_core::graph::Digraph3;
use twa_core::oracle::{
    afa_accept_bruteforce, nfa_accept_bruteforce, random_automaton, random_graph, random_simple_nfa,
    reach, RandomShape,
};
use twa_core::reductions::{build_3dstcon_solver, nfa_to_graph};
use twa_core::stationary::eliminate_stationary_moves;
use twa_core::unary::compress_unary_afa;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Target {
    /// accepts_nfa vs brute force vs reachability in the reduced graph.
    Reduction,
    /// Solver verdict on ⟨G⟩ vs reachability.
    Solver,
    /// Fixpoint evaluator vs bounded-height induction.
    Afa,
    /// Verdicts before and after stationary-move elimination.
    Stationary,
    /// Compressed unary evaluation vs the materialized tape.
    Unary,
}

impl Target {
    pub fn name(self) -> &'static str {
        match self {
            Target::Reduction => "reduction",
            Target::Solver => "solver",
            Target::Afa => "afa",
            Target::Stationary => "stationary",
            Target::Unary => "unary",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Instance {
    Run { machine: AutomatonParts, input: String },
    Graph { edges: String },
    Unary { machine: AutomatonParts, length: u64 },
}

impl Instance {
    /// Transitions plus input symbols plus edges.
    pub fn size(&self) -> usize {
        match self {
            Instance::Run { machine, input } => machine.transitions.len() + input.chars().count(),
            Instance::Graph { edges } => edges.lines().count(),
            Instance::Unary { machine, length } => machine.transitions.len() + *length as usize,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub target: Target,
    pub seed: u64,
    pub trial: u64,
    pub original_size: usize,
    pub instance: Instance,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct FuzzOutcome {
    pub target: Target,
    pub seed: u64,
    pub trials: u64,
    pub failures: usize,
    pub counterexample: Option<Counterexample>,
    pub written: Option<PathBuf>,
}

fn word(rng: &mut ChaCha8Rng, alphabet: &[char], max_len: usize) -> String {
    let len = rng.gen_range(0..=max_len);
    (0..len).map(|_| alphabet[rng.gen_range(0..alphabet.len())]).collect()
}

fn with_universal(m: &TwoWayAutomaton, rng: &mut ChaCha8Rng) -> TwoWayAutomaton {
    let mut b = m.to_builder();
    for q in 0..m.state_count() {
        if m.kind(q) == StateKind::Existential && rng.gen_ratio(1, 3) {
            b.set_kind(q, StateKind::Universal);
        }
    }
    b.build().expect("flipping quantifiers keeps the machine valid")
}

/// The instance of trial seed `seed`; the same seed always yields it.
pub fn generate(target: Target, seed: u64) -> Result<Instance, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bits = ['0', '1'];
    Ok(match target {
        Target::Reduction => {
            let m = random_simple_nfa(rng.gen_range(1..=4), rng.gen_range(1..=3), &bits, rng.gen())?;
            Instance::Run { machine: m.to_parts(), input: word(&mut rng, &bits, 6) }
        }
        Target::Solver => Instance::Graph { edges: random_graph(rng.gen_range(1..=7), rng.gen()).to_edge_list() },
        Target::Afa | Target::Stationary => {
            let shape = RandomShape {
                states: rng.gen_range(1..=4),
                alphabet: bits.to_vec(),
                geometry: if rng.gen() { Geometry::Flat } else { Geometry::Circular },
                universal: true,
                stationary: target == Target::Stationary,
                max_branch: 2,
            };
            let m = random_automaton(&shape, rng.gen());
            Instance::Run { machine: m.to_parts(), input: word(&mut rng, &bits, 4) }
        }
        Target::Unary => {
            let m = random_simple_nfa(rng.gen_range(1..=5), 3, &['1'], rng.gen())?;
            let m = with_universal(&m, &mut rng);
            Instance::Unary { machine: m.to_parts(), length: rng.gen_range(0..=80) }
        }
    })
}

fn mismatch(labels: &[(&str, bool)]) -> Option<String> {
    let first = labels[0].1;
    if labels.iter().all(|&(_, v)| v == first) {
        return None;
    }
    Some(labels.iter().map(|(n, v)| format!("{n}={v}")).collect::<Vec<_>>().join(" "))
}

/// `Some(detail)` when the implementations under test disagree.
pub fn check(target: Target, inst: &Instance) -> Result<Option<String>, CliError> {
    match (target, inst) {
        (Target::Reduction, Instance::Run { machine, input }) => {
            let m = machine.build()?;
            let r = nfa_to_graph(&m, input)?;
            Ok(mismatch(&[
                ("accepts_nfa", accepts_nfa(&m, input)?.accepted),
                ("bruteforce", nfa_accept_bruteforce(&m, input)?),
                ("reach", reach(&r.graph, r.source, r.target)),
            ]))
        }
        (Target::Solver, Instance::Graph { edges }) => {
            let g = Digraph3::parse_edge_list(edges)?;
            let solver = build_3dstcon_solver(g.n())?;
            Ok(mismatch(&[
                ("solver", accepts_nfa(&solver, &encode_graph(&g))?.accepted),
                ("reach", reach(&g, 0, g.n() - 1)),
            ]))
        }
        (Target::Afa, Instance::Run { machine, input }) => {
            let m = machine.build()?;
            Ok(mismatch(&[
                ("fixpoint", accepts_afa_fixpoint(&m, input)?),
                ("bruteforce", afa_accept_bruteforce(&m, input)?),
            ]))
        }
        (Target::Stationary, Instance::Run { machine, input }) => {
            let m = machine.build()?;
            let e = eliminate_stationary_moves(&m);
            if e.has_stationary_moves() {
                return Ok(Some("stationary moves survive elimination".into()));
            }
            let bound = m.state_count() * (m.alphabet().len() + 3);
            if e.state_count() > bound {
                return Ok(Some(format!("{} states after elimination, bound {bound}", e.state_count())));
            }
            Ok(mismatch(&[
                ("before", accepts_afa_fixpoint(&m, input)?),
                ("after", accepts_afa_fixpoint(&e, input)?),
                ("bruteforce", afa_accept_bruteforce(&m, input)?),
            ]))
        }
        (Target::Unary, Instance::Unary { machine, length }) => {
            let m = machine.build()?;
            let tape = "1".repeat(*length as usize);
            let compressed = compress_unary_afa(&m, 1, 0)?;
            Ok(mismatch(&[
                ("compressed", compressed.evaluate_unary(&UnaryWord::from_length((*length).into()))?),
                ("materialized", accepts_afa_fixpoint(&m, &tape)?),
            ]))
        }
        _ => Err(CliError::Format(format!("instance does not fit target `{}`", target.name()))),
    }
}

fn without_transition(m: &AutomatonParts, i: usize) -> AutomatonParts {
    let mut m = m.clone();
    m.transitions.remove(i);
    m
}

/// One-step reductions of `inst`, smallest change first.
fn shrink_candidates(inst: &Instance) -> Vec<Instance> {
    let mut out = Vec::new();
    match inst {
        Instance::Run { machine, input } => {
            let chars: Vec<char> = input.chars().collect();
            for i in 0..chars.len() {
                let x: String = chars.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, c)| c).collect();
                out.push(Instance::Run { machine: machine.clone(), input: x });
            }
            for i in 0..machine.transitions.len() {
                out.push(Instance::Run { machine: without_transition(machine, i), input: input.clone() });
            }
        }
        Instance::Graph { edges } => {
            let lines: Vec<&str> = edges.lines().collect();
            for i in 1..lines.len() {
                let kept: Vec<&str> = lines.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, l)| *l).collect();
                out.push(Instance::Graph { edges: kept.join("\n") + "\n" });
            }
        }
        Instance::Unary { machine, length } => {
            let mut lens = vec![0, length / 2, length.saturating_sub(1)];
            lens.dedup();
            for l in lens.into_iter().filter(|l| l < length) {
                out.push(Instance::Unary { machine: machine.clone(), length: l });
            }
            for i in 0..machine.transitions.len() {
                out.push(Instance::Unary { machine: without_transition(machine, i), length: *length });
            }
        }
    }
    out
}

/// Greedy minimization: repeatedly takes the first smaller candidate that
/// still fails, until none does.
pub fn minimize(inst: Instance, fails: impl Fn(&Instance) -> bool) -> Instance {
    let mut cur = inst;
    'outer: loop {
        for c in shrink_candidates(&cur) {
            if fails(&c) {
                cur = c;
                continue 'outer;
            }
        }
        return cur;
    }
}

fn still_fails(target: Target) -> impl Fn(&Instance) -> bool {
    move |i| matches!(check(target, i), Ok(Some(_)))
}

pub fn campaign(target: Target, seed: u64, trials: u64, out_dir: &Path) -> Result<FuzzOutcome, CliError> {
    let results: Vec<(u64, Instance, Option<String>)> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let inst = generate(target, seed.wrapping_add(i))?;
            let verdict = check(target, &inst)?;
            Ok((i, inst, verdict))
        })
        .collect::<Result<_, CliError>>()?;
    let mut failing = results.into_iter().filter_map(|(i, inst, d)| d.map(|d| (i, inst, d)));
    let Some((trial, inst, _)) = failing.next() else {
        return Ok(FuzzOutcome { target, seed, trials, failures: 0, counterexample: None, written: None });
    };
    let failures = 1 + failing.count();
    let original_size = inst.size();
    let small = minimize(inst, still_fails(target));
    let detail = check(target, &small)?.unwrap_or_default();
    let cx = Counterexample { target, seed, trial, original_size, instance: small, detail };
    let path = out_dir.join(format!("counterexample-{}-{seed}-{trial}.json", target.name()));
    std::fs::write(&path, serde_json::to_string_pretty(&cx)?)?;
    Ok(FuzzOutcome { target, seed, trials, failures, counterexample: Some(cx), written: Some(path) })
}

/// Re-checks a stored counterexample; `Some(detail)` if it still fails.
pub fn replay(cx: &Counterexample) -> Result<Option<String>, CliError> {
    check(cx.target, &cx.instance)
}
