use std::fmt::Write as _;
use std::io::Read;
use std::ops::RangeInclusive;
use std::path::Path;

use clap::ValueEnum;
use serde_json::{json, Value};
use twa_core::codecs::{
    bin_fixed, decode_automaton, decode_graph, decode_graph_prime, decode_quaternary, encode_automaton,
    encode_graph, encode_graph_prime, encode_graph_unary, encode_quaternary, parse_bin_fixed,
    vertex_count_of_encoding, PrimeTable, Skeleton, UnaryWord,
};
use twa_core::config::Config;
use twa_core::dtm::bundled::{acceptor, acceptor_bounds, ACCEPTORS};
use twa_core::eval::{accepts_afa_fixpoint, accepts_nfa, default_depth, evaluate_leveled, narrowness_of};
use twa_core::graph::Digraph3;
use twa_core::oracle::{afa_accept_bruteforce, nfa_accept_bruteforce, reach};
use twa_core::pipeline::{PipelineSpec, Source, Stage};
use twa_core::reductions::{nfa_to_graph, normalize_unique_accept};
use twa_core::report::{automaton_dot, build_family, report_state_complexity, Family, ReportOptions};
use twa_core::stationary::eliminate_stationary_moves;
use twa_core::unary::{build_unary_3dstcon_solver, compress_unary_afa, graph_binary_to_prime, rho_decompose};
use twa_core::{dtm_to_narrow_afa, run_pipeline, Error as CoreError, TwoWayAutomaton};

use crate::error::CliError;
use crate::fuzz::{self, Counterexample, Target};
use crate::{Chain, Codec, Global, Mode, Outcome, Reduction, UnaryCommand};

fn read_input(path: Option<&Path>) -> Result<Vec<u8>, CliError> {
    match path {
        Some(p) if p != Path::new("-") => Ok(std::fs::read(p)?),
        _ => {
            let mut buf = Vec::new();
            std::io::stdin().read_to_end(&mut buf)?;
            Ok(buf)
        }
    }
}

fn text_of(bytes: &[u8]) -> Result<String, CliError> {
    String::from_utf8(bytes.to_vec()).map_err(|_| CliError::Format("input is not UTF-8".into()))
}

fn load_machine(path: &Path) -> Result<(TwoWayAutomaton, Vec<u8>), CliError> {
    let bytes = std::fs::read(path)?;
    let m = TwoWayAutomaton::from_json(&text_of(&bytes)?)?;
    Ok((m, bytes))
}

fn line(s: &str) -> String {
    if s.ends_with('\n') {
        s.to_string()
    } else {
        format!("{s}\n")
    }
}

fn verdict_word(b: bool) -> &'static str {
    if b {
        "accept"
    } else {
        "reject"
    }
}

fn parse_family(s: &str) -> Result<Family, CliError> {
    s.parse().map_err(|e: CoreError| CliError::Usage(e.to_string()))
}

/// Graph whose unary encoding has length `e`, if there is one.
fn decode_unary(e: &UnaryWord, n: usize) -> Result<Digraph3, CliError> {
    let table = PrimeTable::new(n);
    let mut g = Digraph3::new(n)?;
    for i in 0..n {
        for j in 0..n {
            if (i, j) == (0, 0) {
                continue;
            }
            if e.residue(table.get(i, j)?) == 0 {
                g.add_edge(i, j).map_err(|err| CliError::Format(format!("length {e}: {err}")))?;
            }
        }
    }
    if encode_graph_unary(&g)?.length() != e.length() {
        return Err(CliError::Format(format!("length {e} is not a product of distinct edge primes for n = {n}")));
    }
    Ok(g)
}

fn codec_name(c: Codec) -> String {
    c.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default()
}

pub fn encode(codec: Codec, input: Option<&Path>, c: usize, width: Option<usize>) -> Result<Outcome, CliError> {
    let bytes = read_input(input)?;
    let text = text_of(&bytes)?;
    let graph = || Digraph3::parse_edge_list(&text);
    let out = match codec {
        Codec::Quaternary => encode_quaternary(text.trim_end_matches(['\n', '\r']))?,
        Codec::Graph => encode_graph(&graph()?),
        Codec::Prime => encode_graph_prime(&graph()?)?,
        Codec::Unary => encode_graph_unary(&graph()?)?.to_string(),
        Codec::Automaton => encode_automaton(&TwoWayAutomaton::from_json(&text)?, c)?,
        Codec::Bin => {
            let w = width.ok_or_else(|| CliError::Usage("bin needs --width".into()))?;
            let i: u64 = text.trim().parse().map_err(|_| CliError::Format(format!("not an integer: `{}`", text.trim())))?;
            bin_fixed(w, i)?
        }
    };
    Ok(Outcome::new(json!({ "codec": codec_name(codec), "output": out }), line(&out)).input("input", bytes))
}

pub fn decode(
    codec: Codec,
    input: Option<&Path>,
    n: Option<usize>,
    skeleton: Option<&Path>,
    c: usize,
) -> Result<Outcome, CliError> {
    let bytes = read_input(input)?;
    let text = text_of(&bytes)?;
    let x = text.trim();
    let need_n = || n.ok_or_else(|| CliError::Usage(format!("{} needs --n", codec_name(codec))));
    let out = match codec {
        Codec::Quaternary => decode_quaternary(x)?,
        Codec::Graph => decode_graph(x)?.to_edge_list(),
        Codec::Prime => decode_graph_prime(x, need_n()?)?.to_edge_list(),
        Codec::Unary => decode_unary(&x.parse::<UnaryWord>()?, need_n()?)?.to_edge_list(),
        Codec::Automaton => {
            let path = skeleton.ok_or_else(|| CliError::Usage("automaton needs --skeleton".into()))?;
            let (skel, _) = load_machine(path)?;
            decode_automaton(x, &Skeleton::of(&skel), c)?.to_json()
        }
        Codec::Bin => parse_bin_fixed(x)
            .ok_or_else(|| CliError::Format(format!("`{x}` is not a bin_s block")))?
            .to_string(),
    };
    Ok(Outcome::new(json!({ "codec": codec_name(codec), "output": out }), line(&out)).input("input", bytes))
}

fn machine_outcome(m: &TwoWayAutomaton, out: Option<&Path>, mut record: Value) -> Result<Outcome, CliError> {
    let s = m.structure();
    record["structure"] = serde_json::to_value(s)?;
    let text = match out {
        Some(p) => {
            std::fs::write(p, m.to_json())?;
            record["written"] = json!(p.display().to_string());
            format!(
                "{} states, branching {}, simple {}; written to {}\n",
                s.state_count,
                s.branching_bound,
                s.is_simple,
                p.display()
            )
        }
        None => {
            record["machine"] = serde_json::to_value(m.to_parts())?;
            line(&m.to_json())
        }
    };
    Ok(Outcome::new(record, text))
}

pub fn build(family: &str, n: usize, out: Option<&Path>, cfg: &Config) -> Result<Outcome, CliError> {
    let fam = parse_family(family)?;
    let m = build_family(&fam, n)?;
    if m.state_count() > cfg.caps.build_states {
        return Err(CliError::Failed(format!(
            "{fam} at n = {n} has {} states, over the cap {}",
            m.state_count(),
            cfg.caps.build_states
        )));
    }
    machine_outcome(&m, out, json!({ "family": fam.to_string(), "n": n }))
}

pub fn run(machine: &Path, x: &str, mode: Mode) -> Result<Outcome, CliError> {
    let (m, bytes) = load_machine(machine)?;
    let mut record = json!({ "input": x });
    let verdict = match mode {
        Mode::Auto if m.has_universal_states() => accepts_afa_fixpoint(&m, x)?,
        Mode::Auto | Mode::Nfa => {
            let v = accepts_nfa(&m, x)?;
            record["shortest_path"] = json!(v.shortest_path);
            v.accepted
        }
        Mode::Afa => accepts_afa_fixpoint(&m, x)?,
        Mode::Leveled => evaluate_leveled(&m, x, default_depth(&m, x))?.0,
        Mode::Oracle if m.has_universal_states() => afa_accept_bruteforce(&m, x)?,
        Mode::Oracle => nfa_accept_bruteforce(&m, x)?,
    };
    record["accepted"] = json!(verdict);
    Ok(Outcome::new(record, line(verdict_word(verdict))).input("machine", bytes))
}

pub fn reduce(
    kind: Reduction,
    machine: Option<&Path>,
    input: Option<&str>,
    dtm: &str,
    n: Option<usize>,
    out: Option<&Path>,
) -> Result<Outcome, CliError> {
    let need_machine = || {
        machine.ok_or_else(|| CliError::Usage("this reduction needs --machine".into())).and_then(load_machine)
    };
    match kind {
        Reduction::NfaToGraph => {
            let (m, bytes) = need_machine()?;
            let x = input.unwrap_or("");
            let r = nfa_to_graph(&m, x)?;
            let text = format!(
                "# source={} target={} e={} relays={}\n{}",
                r.source,
                r.target,
                r.e,
                r.relays,
                r.graph.to_edge_list()
            );
            if let Some(p) = out {
                std::fs::write(p, &text)?;
            }
            let record = json!({ "input": x, "reduction": r, "reachable": reach(&r.graph, r.source, r.target) });
            Ok(Outcome::new(record, text).input("machine", bytes))
        }
        Reduction::DtmToAfa => {
            let d = acceptor(dtm)
                .ok_or_else(|| CliError::Usage(format!("unknown DTM `{dtm}`; bundled: {}", ACCEPTORS.join(", "))))?;
            let len = n.ok_or_else(|| CliError::Usage("dtm-to-afa needs --n (input length)".into()))?;
            let a = dtm_to_narrow_afa(&d, &acceptor_bounds(len), len)?;
            machine_outcome(&a.machine, out, json!({ "dtm": dtm, "afa": a }))
        }
        Reduction::Stationary => {
            let (m, bytes) = need_machine()?;
            let e = eliminate_stationary_moves(&m);
            let record = json!({ "states_before": m.state_count() });
            Ok(machine_outcome(&e, out, record)?.input("machine", bytes))
        }
        Reduction::Normalize => {
            let (m, bytes) = need_machine()?;
            Ok(machine_outcome(&normalize_unique_accept(&m)?, out, json!({}))?.input("machine", bytes))
        }
        Reduction::GraphToPrime => {
            let bytes = read_input(input.map(Path::new))?;
            let prime = graph_binary_to_prime(text_of(&bytes)?.trim())?;
            if let Some(p) = out {
                std::fs::write(p, &prime)?;
            }
            Ok(Outcome::new(json!({ "prime": prime }), line(&prime)).input("graph", bytes))
        }
    }
}

pub fn measure(machine: &Path, x: &str, depth: Option<usize>) -> Result<Outcome, CliError> {
    let (m, bytes) = load_machine(machine)?;
    let depth = depth.unwrap_or_else(|| default_depth(&m, x));
    let (verdict, g) = evaluate_leveled(&m, x, depth)?;
    let w = narrowness_of(&g);
    let s = m.structure();
    let widths = g.widths();
    let text = format!(
        "states {}\nbranching {}\nsweeping {}\nend-branching {}\nsimple {}\ndeterministic {}\n\
         depth {}\nlevels {}\nmax width {}\nmax forall width {}\nleveled {}\nverdict {}\n",
        s.state_count,
        s.branching_bound,
        s.is_sweeping,
        s.is_end_branching,
        s.is_simple,
        s.is_deterministic,
        depth,
        widths.len(),
        widths.iter().max().copied().unwrap_or(0),
        w.max_forall_width,
        w.leveled,
        verdict_word(verdict),
    );
    let record = json!({ "input": x, "depth": depth, "structure": s, "widths": widths, "narrowness": w, "accepted": verdict });
    Ok(Outcome::new(record, text).input("machine", bytes))
}

pub fn fuzz_campaign(target: Target, seed: u64, trials: u64, out_dir: &Path) -> Result<Outcome, CliError> {
    let out = fuzz::campaign(target, seed, trials, out_dir)?;
    if let (Some(cx), Some(path)) = (&out.counterexample, &out.written) {
        return Err(CliError::Disagreement(format!(
            "{} of {trials} trials failed; trial {} minimized from size {} to {} ({}); saved to {}",
            out.failures,
            cx.trial,
            cx.original_size,
            cx.instance.size(),
            cx.detail,
            path.display()
        )));
    }
    let text = format!("{}: {trials} trials, no disagreement\n", target.name());
    Ok(Outcome::new(serde_json::to_value(&out)?, text).seed(Some(seed)))
}

pub fn fuzz_replay(path: &Path) -> Result<Outcome, CliError> {
    let bytes = std::fs::read(path)?;
    let cx: Counterexample = serde_json::from_slice(&bytes)?;
    if let Some(detail) = fuzz::replay(&cx)? {
        return Err(CliError::Disagreement(format!("{} counterexample reproduces: {detail}", cx.target.name())));
    }
    let text = format!("{} counterexample no longer reproduces\n", cx.target.name());
    Ok(Outcome::new(json!({ "target": cx.target, "reproduces": false }), text)
        .seed(Some(cx.seed))
        .input("counterexample", bytes))
}

fn chain_spec(chain: Chain, seed: u64, trials: usize, dtm: &str) -> PipelineSpec {
    let random_graphs = Some(Source::RandomGraph { n_min: 1, n_max: 8 });
    match chain {
        Chain::Nfa => PipelineSpec::nfa_chain(seed, trials),
        Chain::Dtm => PipelineSpec::dtm_chain(dtm, seed, trials),
        Chain::Graph => PipelineSpec {
            seed,
            trials,
            source: random_graphs,
            stages: vec![Stage::Encode, Stage::BuildSolver, Stage::Evaluate, Stage::OracleCheck],
        },
        Chain::Unary => PipelineSpec {
            seed,
            trials,
            source: Some(Source::RandomGraph { n_min: 1, n_max: 4 }),
            stages: vec![Stage::CompressUnary, Stage::Evaluate, Stage::OracleCheck],
        },
    }
}

pub fn verify(
    chain: Option<Chain>,
    seed: Option<u64>,
    trials: usize,
    spec_path: Option<&Path>,
    dtm: &str,
    out_dir: &Path,
) -> Result<Outcome, CliError> {
    let mut inputs = Vec::new();
    let spec = match (spec_path, chain, seed) {
        (Some(p), _, _) => {
            let bytes = std::fs::read(p)?;
            let spec: PipelineSpec = serde_json::from_slice(&bytes)?;
            inputs.push(("spec".to_string(), bytes));
            spec
        }
        (None, Some(c), Some(s)) => chain_spec(c, s, trials, dtm),
        _ => return Err(CliError::Usage("verify needs a chain and --seed, or --spec".into())),
    };
    match run_pipeline(&spec) {
        Ok(m) => {
            let checks = m.outcome.get("checks").cloned().unwrap_or(json!(0));
            let text = format!("{} trials, {checks} oracle checks, no disagreement\n", spec.trials);
            let mut o = Outcome::new(json!({ "spec": spec, "outcome": m.outcome }), text).seed(Some(spec.seed));
            o.inputs = inputs;
            Ok(o)
        }
        Err(CoreError::Disagreement(cx)) => {
            let path = out_dir.join(format!("counterexample-verify-{}.json", spec.seed));
            std::fs::write(&path, &cx)?;
            Err(CliError::Disagreement(format!("{cx} (saved to {})", path.display())))
        }
        Err(CoreError::Invalid(e)) => Err(CliError::Usage(e)),
        Err(e) => Err(e.into()),
    }
}

pub fn report(
    family: &str,
    range: RangeInclusive<usize>,
    seed: u64,
    samples: usize,
    csv: bool,
    dot_dir: Option<&Path>,
    cfg: &Config,
) -> Result<Outcome, CliError> {
    let fam = parse_family(family)?;
    let opts = ReportOptions { cap: cfg.caps.build_states, samples, seed };
    let table = report_state_complexity(range, &fam, &opts);
    if let Some(dir) = dot_dir {
        std::fs::create_dir_all(dir)?;
        for r in &table.rows {
            let m = build_family(&fam, r.n)?;
            let name = fam.to_string().replace(':', "-");
            std::fs::write(dir.join(format!("{name}-{}.dot", r.n)), automaton_dot(&m))?;
        }
    }
    let text = if csv { table.to_csv() } else { table.to_text() };
    Ok(Outcome::new(serde_json::to_value(&table)?, text).seed(Some(seed)))
}

pub fn export_dot(
    machine: Option<&Path>,
    family: Option<&str>,
    n: Option<usize>,
    input: Option<&str>,
    out: Option<&Path>,
) -> Result<Outcome, CliError> {
    let mut o = Outcome::new(json!({}), "");
    let m = match (machine, family, n) {
        (Some(p), _, _) => {
            let (m, bytes) = load_machine(p)?;
            o = o.input("machine", bytes);
            m
        }
        (None, Some(f), Some(n)) => build_family(&parse_family(f)?, n)?,
        _ => return Err(CliError::Usage("export-dot needs --machine or --family with --n".into())),
    };
    let dot = match input {
        Some(x) => evaluate_leveled(&m, x, default_depth(&m, x))?.1.to_dot(&m),
        None => automaton_dot(&m),
    };
    match out {
        Some(p) => {
            std::fs::write(p, &dot)?;
            o.json = json!({ "written": p.display().to_string(), "bytes": dot.len() });
        }
        None => {
            o.text = dot.clone();
            o.json = json!({ "dot": dot });
        }
    }
    Ok(o)
}

fn unary_machine(machine: Option<&Path>, solver_n: Option<usize>) -> Result<(TwoWayAutomaton, Option<Vec<u8>>), CliError> {
    match (machine, solver_n) {
        (Some(p), _) => load_machine(p).map(|(m, b)| (m, Some(b))),
        (None, Some(n)) => Ok((build_unary_3dstcon_solver(n)?, None)),
        _ => Err(CliError::Usage("give --machine or --solver".into())),
    }
}

fn solve(
    sources: (Option<&Path>, Option<&Path>, Option<&Path>, Option<&str>),
    n: Option<usize>,
    materialize: bool,
    cfg: &Config,
) -> Result<Outcome, CliError> {
    let need_n = || n.ok_or_else(|| CliError::Usage("this instance form needs --n".into()));
    let mut inputs = Vec::new();
    let mut read = |name: &str, p: &Path| -> Result<String, CliError> {
        let bytes = std::fs::read(p)?;
        let t = text_of(&bytes)?;
        inputs.push((name.to_string(), bytes));
        Ok(t)
    };
    // Everything except a bare length goes through the prime form.
    let (n, prime, word) = match sources {
        (Some(p), ..) => {
            let g = Digraph3::parse_edge_list(&read("graph", p)?)?;
            (g.n(), Some(encode_graph_prime(&g)?), None)
        }
        (_, Some(p), ..) => {
            let x = read("binary", p)?;
            let x = x.trim();
            let n = vertex_count_of_encoding(x).ok_or_else(|| CliError::Format("not a graph encoding".into()))?;
            (n, Some(graph_binary_to_prime(x)?), None)
        }
        (_, _, Some(p), _) => (need_n()?, Some(read("prime", p)?.trim().to_string()), None),
        (_, _, _, Some(len)) => (need_n()?, None, Some(len.parse::<UnaryWord>()?)),
        _ => return Err(CliError::Usage("give --graph, --binary, --prime or --length".into())),
    };
    let graph = match (&prime, &word) {
        (Some(x), _) => Some(decode_graph_prime(x, n)?),
        (None, Some(e)) => decode_unary(e, n).ok(),
        _ => None,
    };
    let word = match (word, &graph) {
        (Some(e), _) => e,
        (None, Some(g)) => encode_graph_unary(g)?,
        (None, None) => unreachable!("prime inputs always decode to a graph"),
    };
    let m = build_unary_3dstcon_solver(n)?;
    let compressed = compress_unary_afa(&m, n, 0)?;
    let verdict = match &prime {
        Some(x) => compressed.evaluate_prime(x)?,
        None => compressed.evaluate_unary(&word)?,
    };
    let mut record = json!({ "n": n, "length": word.to_string(), "accepted": verdict });
    let mut checks = vec![("compressed", verdict)];
    if let Some(g) = &graph {
        checks.push(("reach", reach(g, 0, n - 1)));
    }
    if materialize {
        let cap = cfg.caps.unary_materialization;
        if word.saturating_len(cap.saturating_add(1)) <= cap {
            checks.push(("materialized", accepts_nfa(&m, &word.materialize(cap)?)?.accepted));
        } else {
            record["materialized"] = json!(format!("skipped: length above the cap {cap}"));
        }
    }
    for &(k, v) in &checks[1..] {
        record[k] = json!(v);
    }
    if checks.iter().any(|&(_, v)| v != verdict) {
        let detail: Vec<String> = checks.iter().map(|(k, v)| format!("{k}={v}")).collect();
        return Err(CliError::Disagreement(format!("n = {n}, length {word}: {}", detail.join(" "))));
    }
    let mut o = Outcome::new(record, line(verdict_word(verdict)));
    o.inputs = inputs;
    Ok(o)
}

fn compress(
    machine: Option<&Path>,
    solver: bool,
    n: usize,
    flat_out: Option<&Path>,
    cfg: &Config,
) -> Result<Outcome, CliError> {
    let (m, bytes) = unary_machine(machine, solver.then_some(n))?;
    let c = compress_unary_afa(&m, n, cfg.caps.flat_emission)?;
    let r = c.report();
    let mut record = serde_json::to_value(r)?;
    let mut text = format!(
        "n {}\nsource states {}\nsweep starts {}\nmax tail {}\nmax cycle {}\nflat estimate {}\nflat cap {}\n",
        r.n, r.source_states, r.sweep_starts, r.max_tail, r.max_cycle, r.flat_estimate, r.flat_cap
    );
    match (c.flat(), flat_out) {
        (Some(f), Some(p)) => {
            std::fs::write(p, f.machine.to_json())?;
            let _ = writeln!(text, "flat states {} written to {}", f.states, p.display());
            record["written"] = json!(p.display().to_string());
        }
        (Some(f), None) => {
            let _ = writeln!(text, "flat states {}", f.states);
        }
        (None, _) => text.push_str("flat machine not emitted (over the cap)\n"),
    }
    let mut o = Outcome::new(record, text);
    if let Some(b) = bytes {
        o = o.input("machine", b);
    }
    Ok(o)
}

fn rho(
    machine: Option<&Path>,
    solver: Option<usize>,
    state: Option<&str>,
    length: Option<&str>,
) -> Result<Outcome, CliError> {
    let (m, bytes) = unary_machine(machine, solver)?;
    let states: Vec<usize> = match state {
        Some(name) => vec![m.state_id(name).ok_or_else(|| CliError::Usage(format!("no state `{name}`")))?],
        None => (0..m.state_count()).collect(),
    };
    let e = length.map(str::parse::<UnaryWord>).transpose()?;
    let names = |qs: &[usize]| qs.iter().map(|&q| m.name(q).to_string()).collect::<Vec<_>>();
    let mut rows = Vec::new();
    let mut text = String::new();
    for q in states {
        let r = rho_decompose(&m, q)?;
        let after = e.as_ref().map(|e| r.state_after(e).map(|p| m.name(p).to_string()));
        let _ = write!(
            text,
            "{}: tail {} cycle {} end {:?}",
            m.name(q),
            r.tail.len(),
            r.cycle.len(),
            r.end
        );
        if let Some(a) = &after {
            let _ = write!(text, " after {}", a.as_deref().unwrap_or("-"));
        }
        text.push('\n');
        rows.push(json!({
            "state": m.name(q),
            "tail": names(&r.tail),
            "cycle": names(&r.cycle),
            "end": r.end,
            "after": after,
        }));
    }
    let mut o = Outcome::new(json!({ "length": e.map(|e| e.to_string()), "rho": rows }), text);
    if let Some(b) = bytes {
        o = o.input("machine", b);
    }
    Ok(o)
}

pub fn unary(cmd: UnaryCommand, _g: &Global, cfg: &Config) -> Result<Outcome, CliError> {
    match cmd {
        UnaryCommand::Solve { graph, binary, prime, length, n, materialize } => solve(
            (graph.as_deref(), binary.as_deref(), prime.as_deref(), length.as_deref()),
            n,
            materialize,
            cfg,
        ),
        UnaryCommand::Compress { machine, solver, n, flat_out } => {
            compress(machine.as_deref(), solver, n, flat_out.as_deref(), cfg)
        }
        UnaryCommand::Rho { machine, solver, state, length } => {
            rho(machine.as_deref(), solver, state.as_deref(), length.as_deref())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unary_lengths_decode_to_graphs() {
        let g = Digraph3::from_edges(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let e = encode_graph_unary(&g).unwrap();
        assert_eq!(decode_unary(&e, 3).unwrap(), g);
        let decimal: UnaryWord = e.length().to_string().parse().unwrap();
        assert_eq!(decode_unary(&decimal, 3).unwrap(), g);
        // 4 = 2·2 repeats a prime.
        assert!(matches!(decode_unary(&"4".parse().unwrap(), 2), Err(CliError::Format(_))));
        assert_eq!(decode_unary(&"1".parse().unwrap(), 2).unwrap().edge_count(), 0);
    }

    #[test]
    fn line_adds_one_newline() {
        assert_eq!(line("a"), "a\n");
        assert_eq!(line("a\n"), "a\n");
    }
}
