//! Seeded chains of constructions, checked against the oracles.
//!
//! A pipeline draws an instance from its source once per trial and pushes it
//! through the stages in order. Each stage consumes the previous value and
//! produces the next; `oracle-check` compares the latest verdict with the
//! source's ground truth and stops the run on the first disagreement.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::automaton::TwoWayAutomaton;
use crate::codecs::{decode_graph, encode_graph, encode_graph_prime};
use crate::dtm::bundled::{acceptor, acceptor_bounds};
use crate::dtm::{dtm_to_narrow_afa, SpaceBoundedDtm};
use crate::error::Error;
use crate::eval::{accepts_nfa, default_depth, evaluate_leveled};
use crate::graph::Digraph3;
use crate::manifest::{sha256_hex, ExperimentManifest};
use crate::oracle::{nfa_accept_bruteforce, random_graph_with, random_simple_nfa, reach};
use crate::reductions::{
    build_3dstcon_solver, build_graph_validator, legalize_indegree, nfa_to_graph, solver_instance,
};
use crate::unary::{build_unary_3dstcon_solver, compress_unary_afa, UnaryCompression};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Source {
    /// A fixed graph in edge-list form.
    Graph { edges: String },
    RandomGraph { n_min: usize, n_max: usize },
    /// Random simple 2NFAs with random inputs up to `max_len`.
    RandomNfa { states: usize, c: usize, alphabet: String, max_len: usize },
    /// A bundled DTM acceptor on a fixed input.
    Dtm { name: String, x: String },
    RandomDtm { name: String, max_len: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    Encode,
    BuildSolver,
    BuildValidator,
    NfaToGraph,
    DtmToAfa,
    CompressUnary,
    Evaluate,
    OracleCheck,
}

impl Stage {
    pub fn name(self) -> &'static str {
        match self {
            Stage::Encode => "encode",
            Stage::BuildSolver => "build-solver",
            Stage::BuildValidator => "build-validator",
            Stage::NfaToGraph => "nfa-to-graph",
            Stage::DtmToAfa => "dtm-to-afa",
            Stage::CompressUnary => "compress-unary",
            Stage::Evaluate => "evaluate",
            Stage::OracleCheck => "oracle-check",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineSpec {
    pub seed: u64,
    pub trials: usize,
    pub source: Option<Source>,
    #[serde(default)]
    pub stages: Vec<Stage>,
}

impl PipelineSpec {
    /// Random 2NFA, reduction graph, binary encoding, solver, verdict.
    pub fn nfa_chain(seed: u64, trials: usize) -> Self {
        PipelineSpec {
            seed,
            trials,
            source: Some(Source::RandomNfa { states: 3, c: 3, alphabet: "01".into(), max_len: 4 }),
            stages: vec![
                Stage::NfaToGraph,
                Stage::Encode,
                Stage::BuildSolver,
                Stage::Evaluate,
                Stage::OracleCheck,
            ],
        }
    }

    /// Bundled DTM, narrow 2AFA, leveled evaluation, verdict.
    pub fn dtm_chain(name: &str, seed: u64, trials: usize) -> Self {
        PipelineSpec {
            seed,
            trials,
            source: Some(Source::RandomDtm { name: name.into(), max_len: 4 }),
            stages: vec![Stage::DtmToAfa, Stage::Evaluate, Stage::OracleCheck],
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PipelineOutcome {
    pub trials: usize,
    pub checks: usize,
    pub accepted: usize,
    pub rejected: usize,
    /// Per stage, SHA-256 over every value it produced, in trial order.
    pub stage_digests: Vec<(String, String)>,
}

#[derive(Debug, Clone)]
enum Item {
    Graph(Digraph3),
    Encoded { n: usize, x: String },
    Machine { m: Arc<TwoWayAutomaton>, digest: Arc<str>, x: String },
    Dtm { name: String, d: Arc<SpaceBoundedDtm>, x: String },
    Prime { n: usize, x: String, eval: Arc<UnaryCompression> },
    Verdict(bool),
}

impl Item {
    fn kind(&self) -> &'static str {
        match self {
            Item::Graph(_) => "graph",
            Item::Encoded { .. } => "encoded graph",
            Item::Machine { .. } => "machine and input",
            Item::Dtm { .. } => "DTM and input",
            Item::Prime { .. } => "prime encoding",
            Item::Verdict(_) => "verdict",
        }
    }

    fn digest_text(&self) -> String {
        match self {
            Item::Graph(g) => format!("{}|{}", g.n(), g.to_edge_list()),
            Item::Encoded { x, .. } => x.clone(),
            Item::Prime { n, x, .. } => format!("{n}|{x}"),
            Item::Machine { digest, x, .. } => format!("{digest}|{x}"),
            Item::Dtm { name, x, .. } => format!("{name}|{x}"),
            Item::Verdict(b) => b.to_string(),
        }
    }

    fn counterexample(&self) -> Value {
        match self {
            Item::Graph(g) => json!({"n": g.n(), "edges": g.to_edge_list()}),
            Item::Machine { m, x, .. } => json!({"machine": m.to_parts(), "x": x}),
            other => json!({"value": other.digest_text()}),
        }
    }
}

/// Builders shared across trials, keyed by size.
#[derive(Default)]
struct Cache {
    solvers: Mutex<HashMap<usize, Built>>,
    validators: Mutex<HashMap<usize, Built>>,
    afas: Mutex<HashMap<(String, usize), Built>>,
    unary: Mutex<HashMap<usize, Arc<UnaryCompression>>>,
}

type Built = (Arc<TwoWayAutomaton>, Arc<str>);

fn cached<K: std::hash::Hash + Eq + Clone>(
    map: &Mutex<HashMap<K, Built>>,
    key: K,
    build: impl FnOnce() -> Result<TwoWayAutomaton, Error>,
) -> Result<Built, Error> {
    if let Some(hit) = map.lock().expect("cache lock").get(&key) {
        return Ok(hit.clone());
    }
    let m = build()?;
    let digest: Arc<str> = sha256_hex(m.to_json().as_bytes()).into();
    let entry = (Arc::new(m), digest);
    map.lock().expect("cache lock").entry(key).or_insert(entry.clone());
    Ok(entry)
}

struct Trial {
    truth: bool,
    values: Vec<String>,
    verdict: Option<bool>,
    checks: usize,
}

fn mismatch(stage: Stage, got: &Item) -> Error {
    Error::Invalid(format!("stage {} cannot take a {}", stage.name(), got.kind()))
}

fn draw(source: &Source, rng: &mut ChaCha8Rng, seed: u64) -> Result<(Item, bool), Error> {
    match source {
        Source::Graph { edges } => {
            let g = Digraph3::parse_edge_list(edges)?;
            let t = reach(&g, 0, g.n() - 1);
            Ok((Item::Graph(g), t))
        }
        Source::RandomGraph { n_min, n_max } => {
            if *n_min == 0 || n_min > n_max {
                return Err(Error::Invalid(format!("bad size range {n_min}..={n_max}")));
            }
            let n = rng.gen_range(*n_min..=*n_max);
            let g = random_graph_with(n, rng);
            let t = reach(&g, 0, n - 1);
            Ok((Item::Graph(g), t))
        }
        Source::RandomNfa { states, c, alphabet, max_len } => {
            let sigma: Vec<char> = alphabet.chars().collect();
            if sigma.is_empty() {
                return Err(Error::Invalid("empty alphabet".into()));
            }
            let m = random_simple_nfa(*states, *c, &sigma, seed)?;
            let len = rng.gen_range(0..=*max_len);
            let x: String = (0..len).map(|_| sigma[rng.gen_range(0..sigma.len())]).collect();
            let t = nfa_accept_bruteforce(&m, &x)?;
            let digest: Arc<str> = sha256_hex(m.to_json().as_bytes()).into();
            Ok((Item::Machine { m: Arc::new(m), digest, x }, t))
        }
        Source::Dtm { name, x } => dtm_value(name, x.clone()),
        Source::RandomDtm { name, max_len } => {
            let d = acceptor(name).ok_or_else(|| Error::Invalid(format!("unknown DTM `{name}`")))?;
            let sigma = d.input_alphabet().to_vec();
            let len = rng.gen_range(0..=*max_len);
            let x: String = (0..len).map(|_| sigma[rng.gen_range(0..sigma.len())]).collect();
            dtm_value(name, x)
        }
    }
}

fn dtm_value(name: &str, x: String) -> Result<(Item, bool), Error> {
    let d = acceptor(name).ok_or_else(|| Error::Invalid(format!("unknown DTM `{name}`")))?;
    let t = d.run(&x, &acceptor_bounds(x.chars().count()))?.accepted();
    Ok((Item::Dtm { name: name.into(), d: Arc::new(d), x }, t))
}

fn apply(stage: Stage, v: Item, trial: &mut Trial, cache: &Cache) -> Result<Item, Error> {
    Ok(match (stage, v) {
        (Stage::Encode, Item::Graph(g)) => Item::Encoded { n: g.n(), x: encode_graph(&g) },
        (Stage::BuildSolver, Item::Encoded { n, x }) => {
            let (m, digest) = cached(&cache.solvers, n, || Ok(build_3dstcon_solver(n)?))?;
            Item::Machine { m, digest, x }
        }
        (Stage::BuildValidator, Item::Encoded { n, x }) => {
            let (m, digest) = cached(&cache.validators, n, || Ok(build_graph_validator(n)?))?;
            trial.truth = decode_graph(&x).map(|g| g.n() == n).unwrap_or(false);
            Item::Machine { m, digest, x }
        }
        (Stage::NfaToGraph, Item::Machine { m, x, .. }) => {
            let out = legalize_indegree(&nfa_to_graph(&m, &x)?)?;
            Item::Graph(solver_instance(&out)?)
        }
        (Stage::DtmToAfa, Item::Dtm { name, d, x }) => {
            let len = x.chars().count();
            let (m, digest) = cached(&cache.afas, (name, len), || {
                Ok(dtm_to_narrow_afa(&d, &acceptor_bounds(len), len)?.machine)
            })?;
            Item::Machine { m, digest, x }
        }
        (Stage::CompressUnary, Item::Graph(g)) => {
            // Vertex 0's self-loop has no prime; it never changes reachability.
            let mut h = Digraph3::new(g.n())?;
            for (u, v) in g.edges().into_iter().filter(|&e| e != (0, 0)) {
                h.add_edge(u, v)?;
            }
            let n = g.n();
            let hit = cache.unary.lock().expect("cache lock").get(&n).cloned();
            let eval = match hit {
                Some(e) => e,
                None => {
                    let m = build_unary_3dstcon_solver(n)?;
                    let e = Arc::new(compress_unary_afa(&m, n, 0)?);
                    cache.unary.lock().expect("cache lock").entry(n).or_insert(e).clone()
                }
            };
            Item::Prime { n, x: encode_graph_prime(&h)?, eval }
        }
        (Stage::Evaluate, Item::Machine { m, x, .. }) => {
            let v = if m.has_universal_states() {
                evaluate_leveled(&m, &x, default_depth(&m, &x))?.0
            } else {
                accepts_nfa(&m, &x)?.accepted
            };
            Item::Verdict(v)
        }
        (Stage::Evaluate, Item::Prime { x, eval, .. }) => Item::Verdict(eval.evaluate_prime(&x)?),
        (Stage::OracleCheck, Item::Verdict(b)) => {
            trial.checks += 1;
            if b != trial.truth {
                return Err(Error::Disagreement(format!("verdict {b}, oracle {}", trial.truth)));
            }
            Item::Verdict(b)
        }
        (stage, other) => return Err(mismatch(stage, &other)),
    })
}

fn run_trial(spec: &PipelineSpec, source: &Source, i: usize, cache: &Cache) -> Result<Trial, Error> {
    let seed = spec.seed.wrapping_add(i as u64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut v, truth) = draw(source, &mut rng, seed)?;
    let mut trial = Trial { truth, values: Vec::new(), verdict: None, checks: 0 };
    for &stage in &spec.stages {
        let before = v.clone();
        v = apply(stage, v, &mut trial, cache).map_err(|e| match e {
            Error::Disagreement(msg) => Error::Disagreement(
                json!({
                    "trial": i,
                    "seed": seed,
                    "stage": stage.name(),
                    "detail": msg,
                    "input": before.counterexample(),
                })
                .to_string(),
            ),
            e => Error::Invalid(format!("trial {i}, stage {}: {e}", stage.name())),
        })?;
        trial.values.push(v.digest_text());
    }
    if let Item::Verdict(b) = v {
        trial.verdict = Some(b);
    }
    Ok(trial)
}

/// Runs every trial and returns the manifest; the first oracle disagreement
/// is returned as [`Error::Disagreement`] carrying a JSON counterexample.
pub fn run_pipeline(spec: &PipelineSpec) -> Result<ExperimentManifest, Error> {
    let params = serde_json::to_value(spec).expect("spec serializes");
    let mut manifest = ExperimentManifest::new("pipeline", params, Some(spec.seed));
    let Some(source) = &spec.source else {
        if !spec.stages.is_empty() {
            return Err(Error::Invalid("stages without a source".into()));
        }
        return Ok(manifest);
    };
    let cache = Cache::default();
    let trials: Vec<Trial> = (0..spec.trials)
        .into_par_iter()
        .map(|i| run_trial(spec, source, i, &cache))
        .collect::<Result<_, _>>()?;
    let mut hashers: Vec<Sha256> = spec.stages.iter().map(|_| Sha256::new()).collect();
    for t in &trials {
        for (h, text) in hashers.iter_mut().zip(&t.values) {
            h.update(text.as_bytes());
            h.update(b"\n");
        }
    }
    let outcome = PipelineOutcome {
        trials: trials.len(),
        checks: trials.iter().map(|t| t.checks).sum(),
        accepted: trials.iter().filter(|t| t.verdict == Some(true)).count(),
        rejected: trials.iter().filter(|t| t.verdict == Some(false)).count(),
        stage_digests: spec
            .stages
            .iter()
            .zip(hashers)
            .map(|(s, h)| (s.name().to_string(), hex::encode(h.finalize())))
            .collect(),
    };
    manifest.outcome = serde_json::to_value(outcome).expect("outcome serializes");
    Ok(manifest)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_pipeline() {
        let spec = PipelineSpec { seed: 0, trials: 10, source: None, stages: vec![] };
        assert_eq!(run_pipeline(&spec).unwrap().outcome, Value::Null);
    }

    #[test]
    fn graph_solver_chain() {
        let spec = PipelineSpec {
            seed: 3,
            trials: 40,
            source: Some(Source::RandomGraph { n_min: 2, n_max: 6 }),
            stages: vec![Stage::Encode, Stage::BuildSolver, Stage::Evaluate, Stage::OracleCheck],
        };
        let m = run_pipeline(&spec).unwrap();
        assert_eq!(m.outcome["checks"], 40);
        assert_eq!(m.fingerprint(), run_pipeline(&spec).unwrap().fingerprint());
    }

    #[test]
    fn nfa_and_dtm_chains() {
        let m = run_pipeline(&PipelineSpec::nfa_chain(11, 30)).unwrap();
        assert_eq!(m.outcome["checks"], 30);
        let m = run_pipeline(&PipelineSpec::dtm_chain("parity", 5, 10)).unwrap();
        assert_eq!(m.outcome["checks"], 10);
    }

    #[test]
    fn unary_chain_and_validator() {
        let spec = PipelineSpec {
            seed: 1,
            trials: 30,
            source: Some(Source::RandomGraph { n_min: 1, n_max: 4 }),
            stages: vec![Stage::CompressUnary, Stage::Evaluate, Stage::OracleCheck],
        };
        assert_eq!(run_pipeline(&spec).unwrap().outcome["checks"], 30);
        let spec = PipelineSpec {
            seed: 1,
            trials: 5,
            source: Some(Source::RandomGraph { n_min: 2, n_max: 4 }),
            stages: vec![Stage::Encode, Stage::BuildValidator, Stage::Evaluate, Stage::OracleCheck],
        };
        assert_eq!(run_pipeline(&spec).unwrap().outcome["accepted"], 5);
    }

    #[test]
    fn type_mismatch_and_disagreement() {
        let spec = PipelineSpec {
            seed: 0,
            trials: 1,
            source: Some(Source::Graph { edges: "n=2\n0 1\n".into() }),
            stages: vec![Stage::Evaluate],
        };
        assert!(matches!(run_pipeline(&spec), Err(Error::Invalid(_))));
        let mut trial = Trial { truth: true, values: Vec::new(), verdict: None, checks: 0 };
        let r = apply(Stage::OracleCheck, Item::Verdict(false), &mut trial, &Cache::default());
        assert!(matches!(r, Err(Error::Disagreement(_))));
    }
}
